//! Distance-matrix instances: parsing, serialization and synthetic generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Side length of the integer grid used by [`DistanceMatrix::random_metric`].
const GRID_SIDE: u64 = 1000;

/// Symmetric `n × n` matrix of nonnegative integer distances with a zero
/// diagonal. Row `i` is the home venue of team `i` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<i64>,
    metric: bool,
}

impl DistanceMatrix {
    /// Builds a matrix from rows, checking shape, diagonal, symmetry and sign.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Validation("empty matrix".into()));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::UnsupportedSize {
                n,
                reason: "the number of teams must be even",
            });
        }
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            d.extend(row);
        }
        for i in 0..n {
            if d[i * n + i] != 0 {
                return Err(Error::Validation(format!(
                    "diagonal entry ({0},{0}) is {1}, expected 0",
                    i + 1,
                    d[i * n + i]
                )));
            }
            for j in 0..n {
                let v = d[i * n + j];
                if v < 0 {
                    return Err(Error::Validation(format!(
                        "negative distance {v} at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                if v != d[j * n + i] {
                    return Err(Error::Validation(format!(
                        "asymmetric entries ({0},{1})={2} and ({1},{0})={3}",
                        i + 1,
                        j + 1,
                        v,
                        d[j * n + i]
                    )));
                }
            }
        }
        let metric = first_triangle_violation(n, &d).is_none();
        Ok(Self { n, d, metric })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(rows)
    }

    /// Parses whitespace-separated integers, either a bare `k × k` matrix or
    /// the same matrix preceded by `k`.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::Parse("no tokens".into()));
        }
        let values = tokens
            .iter()
            .map(|t| parse_integer(t))
            .collect::<Result<Vec<i64>>>()?;

        let count = values.len();
        let (k, body) = if let Some(k) = exact_sqrt(count) {
            (k, &values[..])
        } else if let Some(k) = exact_sqrt(count - 1).filter(|&k| values[0] == k as i64) {
            (k, &values[1..])
        } else {
            return Err(Error::Parse(format!(
                "{count} tokens match neither a bare k*k matrix nor a sized k, k*k matrix"
            )));
        };
        if k == 0 {
            return Err(Error::Parse("matrix has no rows".into()));
        }
        if k % 2 != 0 {
            return Err(Error::UnsupportedSize {
                n: k,
                reason: "the number of teams must be even",
            });
        }
        Self::new(body.chunks(k).map(<[i64]>::to_vec).collect())
    }

    /// The instance family on which the construction meets its ratio bound
    /// exactly: teams `2i` and `2i+1` are at distance 0, everything else at 1.
    pub fn worst_case(n: usize) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(4) {
            return Err(Error::UnsupportedSize {
                n,
                reason: "the worst-case family requires n >= 4 and n ≡ 0 (mod 4)",
            });
        }
        Self::from_fn(n, |i, j| i64::from(i != j && i / 2 != j / 2))
    }

    /// Seeded metric instance: points on an integer grid, distances are the
    /// ceiling of the Euclidean distance. Ceiling is subadditive, so the
    /// triangle inequality survives the rounding exactly.
    pub fn random_metric(n: usize, seed: u64) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::UnsupportedSize {
                n,
                reason: "random instances need an even n >= 4",
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<(i64, i64)> = (0..n)
            .map(|_| {
                (
                    rng.random_range(0..=GRID_SIDE) as i64,
                    rng.random_range(0..=GRID_SIDE) as i64,
                )
            })
            .collect();
        Self::from_fn(n, |i, j| {
            let (dx, dy) = (points[i].0 - points[j].0, points[i].1 - points[j].1);
            ceil_sqrt((dx * dx + dy * dy) as u64) as i64
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.d.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// `D_i`: total distance from team `i` to every other team.
    pub fn row_sum(&self, i: usize) -> i64 {
        self.row(i).iter().sum()
    }

    /// `D_G`: total weight of the complete graph, each unordered pair once.
    pub fn total_weight(&self) -> i64 {
        (0..self.n).map(|i| self.row_sum(i)).sum::<i64>() / 2
    }

    /// Whether the triangle inequality holds for every triple.
    pub fn is_metric(&self) -> bool {
        self.metric
    }

    /// Some `(i, h, j)` with `d[i][j] > d[i][h] + d[h][j]`, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        first_triangle_violation(self.n, &self.d)
    }

    /// Sized-header text form, one row per line.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DistanceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for row in self.d.chunks(self.n) {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for DistanceMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn first_triangle_violation(n: usize, d: &[i64]) -> Option<(usize, usize, usize)> {
    for i in 0..n {
        for h in 0..n {
            let ih = d[i * n + h];
            for j in 0..n {
                if d[i * n + j] > ih + d[h * n + j] {
                    return Some((i, h, j));
                }
            }
        }
    }
    None
}

/// Accepts plain integers and integral decimals such as `12.0`.
fn parse_integer(token: &str) -> Result<i64> {
    if let Ok(v) = token.parse::<i64>() {
        return Ok(v);
    }
    if let Some((int, frac)) = token.split_once('.') {
        if !frac.is_empty() && frac.bytes().all(|b| b == b'0') {
            if let Ok(v) = int.parse::<i64>() {
                return Ok(v);
            }
        }
    }
    if token.parse::<f64>().is_ok() {
        Err(Error::NonInteger(token.to_string()))
    } else {
        Err(Error::Parse(format!("invalid token {token:?}")))
    }
}

fn exact_sqrt(x: usize) -> Option<usize> {
    let r = x.isqrt();
    (r * r == x).then_some(r)
}

fn ceil_sqrt(x: u64) -> u64 {
    let r = x.isqrt();
    if r * r == x {
        r
    } else {
        r + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_text(n: usize) -> String {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { "0" } else { "1" })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    #[test]
    fn bare_and_sized_forms_agree() {
        let bare = DistanceMatrix::parse(&unit_text(4)).unwrap();
        let sized = DistanceMatrix::parse(&format!("4\n{}", unit_text(4))).unwrap();
        assert_eq!(bare.n(), 4);
        assert_eq!(bare, sized);
        assert_eq!(bare.get(0, 3), 1);
    }

    #[test]
    fn mismatched_header_is_a_parse_error() {
        let text = format!("5\n{}", unit_text(4));
        assert!(matches!(DistanceMatrix::parse(&text), Err(Error::Parse(_))));
        assert!(matches!(DistanceMatrix::parse("1 2 3"), Err(Error::Parse(_))));
        assert!(matches!(DistanceMatrix::parse(""), Err(Error::Parse(_))));
    }

    #[test]
    fn odd_size_is_unsupported() {
        let err = DistanceMatrix::parse(&unit_text(3)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSize { n: 3, .. }));
    }

    #[test]
    fn asymmetric_and_negative_are_rejected() {
        let asym = "0 1 2 3\n1 0 1 1\n2 1 0 1\n4 1 1 0";
        assert!(matches!(DistanceMatrix::parse(asym), Err(Error::Validation(_))));
        let neg = "0 -1 1 1\n-1 0 1 1\n1 1 0 1\n1 1 1 0";
        assert!(matches!(DistanceMatrix::parse(neg), Err(Error::Validation(_))));
        let diag = "1 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0";
        assert!(matches!(DistanceMatrix::parse(diag), Err(Error::Validation(_))));
    }

    #[test]
    fn non_integer_tokens_are_flagged() {
        let text = "0 1.5 1 1\n1.5 0 1 1\n1 1 0 1\n1 1 1 0";
        assert_eq!(
            DistanceMatrix::parse(text).unwrap_err(),
            Error::NonInteger("1.5".into())
        );
        let integral = "0 2.0 1 1\n2.00 0 1 1\n1 1 0 1\n1 1 1 0";
        assert_eq!(DistanceMatrix::parse(integral).unwrap().get(0, 1), 2);
    }

    #[test]
    fn triangle_violation_is_a_flag_not_an_error() {
        let text = "0 10 1 1\n10 0 1 1\n1 1 0 1\n1 1 1 0";
        let dm = DistanceMatrix::parse(text).unwrap();
        assert!(!dm.is_metric());
        assert_eq!(dm.triangle_violation(), Some((0, 2, 1)));
    }

    #[test]
    fn worst_case_smallest_size() {
        let dm = DistanceMatrix::worst_case(4).unwrap();
        assert_eq!(dm.get(0, 1), 0);
        assert_eq!(dm.get(2, 3), 0);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(dm.get(i, j), 1);
        }
        assert!(dm.is_metric());
    }

    #[test]
    fn worst_case_n8_totals() {
        let dm = DistanceMatrix::worst_case(8).unwrap();
        // 28 unordered pairs, 4 of them at distance 0.
        assert_eq!(dm.total_weight(), 24);
        assert!(dm.is_metric());
    }

    #[test]
    fn worst_case_rejects_bad_sizes() {
        for n in [2, 6, 10, 14] {
            assert!(matches!(
                DistanceMatrix::worst_case(n),
                Err(Error::UnsupportedSize { .. })
            ));
        }
    }

    #[test]
    fn random_metric_is_deterministic_and_metric() {
        let a = DistanceMatrix::random_metric(8, 1).unwrap();
        let b = DistanceMatrix::random_metric(8, 1).unwrap();
        let c = DistanceMatrix::random_metric(8, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.is_metric() && c.is_metric());
    }

    #[test]
    fn ceil_sqrt_edges() {
        assert_eq!(ceil_sqrt(0), 0);
        assert_eq!(ceil_sqrt(1), 1);
        assert_eq!(ceil_sqrt(2), 2);
        assert_eq!(ceil_sqrt(16), 4);
        assert_eq!(ceil_sqrt(17), 5);
    }
}
