//! Super-teams, their labeling, and the slot-by-slot super-game timetable.
//!
//! Labels are 0-based in code: label `k` is the super-team `u_{k+1}`.
//! The last label `m-1` is the fixed node of the rotating round-robin; the
//! others (the "white" super-teams) move one position per slot.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::DistanceMatrix;
use crate::matching::min_perfect_matching;

/// Two teams joined by an edge of the minimum matching, in play order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SuperTeam {
    pub first: usize,
    pub second: usize,
}

impl SuperTeam {
    pub fn new(first: usize, second: usize) -> Self {
        Self { first, second }
    }

    pub fn flipped(self) -> Self {
        Self {
            first: self.second,
            second: self.first,
        }
    }

    pub fn members(self) -> [usize; 2] {
        [self.first, self.second]
    }

    fn min_team(self) -> usize {
        self.first.min(self.second)
    }
}

/// Sum of the four cross distances between two super-teams.
pub fn super_distance(dm: &DistanceMatrix, a: SuperTeam, b: SuperTeam) -> i64 {
    a.members()
        .iter()
        .flat_map(|&x| b.members().map(|y| dm.get(x, y)))
        .sum()
}

/// Labeled super-teams `u_1..u_m` and the super-distance table between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperLayout {
    teams: Vec<SuperTeam>,
    superdist: DistanceMatrix,
}

impl SuperLayout {
    /// Uses `teams` as given: `teams[k]` receives label `k`.
    pub fn from_teams(dm: &DistanceMatrix, teams: Vec<SuperTeam>) -> Result<Self> {
        let n = dm.n();
        if teams.len() * 2 != n {
            return Err(Error::Layout(format!(
                "{} super-teams cannot cover {n} teams",
                teams.len()
            )));
        }
        let mut seen = vec![false; n];
        for t in teams.iter().flat_map(|s| s.members()) {
            if t >= n || seen[t] {
                return Err(Error::Layout(format!(
                    "team {} is missing or appears twice",
                    t + 1
                )));
            }
            seen[t] = true;
        }
        let superdist = DistanceMatrix::from_fn(teams.len(), |i, j| {
            if i == j {
                0
            } else {
                super_distance(dm, teams[i], teams[j])
            }
        })?;
        Ok(Self { teams, superdist })
    }

    /// `u_i = (t_{2i-1}, t_{2i})` with no relabeling.
    pub fn identity(dm: &DistanceMatrix) -> Result<Self> {
        let teams = (0..dm.n() / 2).map(|k| SuperTeam::new(2 * k, 2 * k + 1)).collect();
        Self::from_teams(dm, teams)
    }

    pub fn m(&self) -> usize {
        self.teams.len()
    }

    pub fn teams(&self) -> &[SuperTeam] {
        &self.teams
    }

    pub fn team(&self, label: usize) -> SuperTeam {
        self.teams[label]
    }

    pub fn superdist(&self) -> &DistanceMatrix {
        &self.superdist
    }

    /// `D_H`: total weight of the super-team graph.
    pub fn total_superdistance(&self) -> i64 {
        self.superdist.total_weight()
    }

    /// Weight of the last-slot pairing `{(u_i, u_{m+1-i})}`.
    pub fn last_slot_weight(&self) -> i64 {
        let m = self.m();
        (0..m / 2).map(|k| self.superdist.get(k, m - 1 - k)).sum()
    }

    /// `Σ_{i=2}^{m-2} D(u_m, u_i)`: super-distance covered by left games.
    pub fn left_slot_weight(&self) -> i64 {
        let m = self.m();
        (1..m.saturating_sub(2)).map(|k| self.superdist.get(m - 1, k)).sum()
    }

    /// Labels `a` and `b` exchanged.
    pub fn swapped(&self, dm: &DistanceMatrix, a: usize, b: usize) -> Self {
        let mut teams = self.teams.clone();
        teams.swap(a, b);
        Self::from_teams(dm, teams).expect("a permutation of a valid layout is valid")
    }

    /// The two teams inside super-team `label` exchanged.
    pub fn flipped(&self, label: usize) -> Self {
        let mut out = self.clone();
        out.teams[label] = out.teams[label].flipped();
        out
    }

    /// Team-to-partner map of the underlying matching.
    pub fn partners(&self) -> Vec<usize> {
        let mut partner = vec![0; self.teams.len() * 2];
        for s in &self.teams {
            partner[s.first] = s.second;
            partner[s.second] = s.first;
        }
        partner
    }
}

/// Builds the labeled layout used by the construction.
///
/// Super-teams are the pairs of a minimum matching of the teams. The
/// super-teams are then matched again (`M_H`) and labeled so that
/// `(u_i, u_{m+1-i})` runs over `M_H`:
/// `u_m` minimizes its super-distance to everyone except its `M_H` partner,
/// which becomes `u_1`; `u_{m-1}` is the remaining super-team farthest from
/// `u_m` and its partner becomes `u_2`; the other pairs are labeled in
/// order of their smallest team index.
pub fn build_layout(dm: &DistanceMatrix) -> Result<SuperLayout> {
    let n = dm.n();
    if !n.is_multiple_of(4) || n < 8 {
        return Err(Error::UnsupportedSize {
            n,
            reason: "the super-team construction requires n >= 8 and n ≡ 0 (mod 4)",
        });
    }
    let base: Vec<SuperTeam> = min_perfect_matching(dm)?
        .pairs()
        .iter()
        .map(|&(a, b)| SuperTeam::new(a, b))
        .collect();
    let unlabeled = SuperLayout::from_teams(dm, base.clone())?;
    let h = unlabeled.superdist();
    let m = base.len();
    let mh = min_perfect_matching(h)?;
    let partner = mh.mates();

    // Pairs come out of the matching sorted by smallest team, so index
    // order is smallest-original-index order for every tie-break below.
    let fixed = (0..m)
        .min_by_key(|&s| (h.row_sum(s) - h.get(s, partner[s]), s))
        .expect("m >= 4");
    let fixed_partner = partner[fixed];
    let farthest = (0..m)
        .filter(|&s| s != fixed && s != fixed_partner)
        .max_by_key(|&s| (h.get(fixed, s), std::cmp::Reverse(s)))
        .expect("m >= 4");

    let mut labels = vec![usize::MAX; m];
    labels[m - 1] = fixed;
    labels[0] = fixed_partner;
    labels[m - 2] = farthest;
    labels[1] = partner[farthest];

    let mut rest: Vec<(usize, usize)> = mh
        .pairs()
        .iter()
        .copied()
        .filter(|&(a, _)| ![fixed, fixed_partner, farthest, partner[farthest]].contains(&a))
        .collect();
    rest.sort_by_key(|&(a, b)| base[a].min_team().min(base[b].min_team()));
    for (offset, (a, b)) in rest.into_iter().enumerate() {
        let low = offset + 2;
        let key = |s: usize| (base[s].first + base[s].second, base[s].min_team());
        let (small, large) = if key(a) <= key(b) { (a, b) } else { (b, a) };
        labels[low] = small;
        labels[m - 1 - low] = large;
    }

    SuperLayout::from_teams(dm, labels.into_iter().map(|s| base[s]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GameKind {
    Normal,
    Left,
    Last,
}

/// A meeting of two super-teams. `host` is the side that hosts on the
/// first day of the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuperGame {
    pub slot: usize,
    pub kind: GameKind,
    pub host: usize,
    pub guest: usize,
}

impl SuperGame {
    pub fn involves(&self, label: usize) -> bool {
        self.host == label || self.guest == label
    }
}

/// Super-games for slots `1..=m-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperTimetable {
    m: usize,
    slots: Vec<Vec<SuperGame>>,
}

impl SuperTimetable {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Games of slot `q` (1-based).
    pub fn slot(&self, q: usize) -> &[SuperGame] {
        &self.slots[q - 1]
    }

    pub fn slots(&self) -> &[Vec<SuperGame>] {
        &self.slots
    }

    pub fn games(&self) -> impl Iterator<Item = &SuperGame> {
        self.slots.iter().flatten()
    }

    /// First day (0-based) of slot `q`.
    pub fn start_day(q: usize) -> usize {
        4 * (q - 1)
    }

    pub fn days_in_slot(&self, q: usize) -> usize {
        if q == self.m - 1 {
            6
        } else {
            4
        }
    }
}

impl fmt::Display for SuperTimetable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, games) in self.slots.iter().enumerate() {
            let q = i + 1;
            let first = Self::start_day(q) + 1;
            write!(f, "slot {q} (days {first}-{}):", first + self.days_in_slot(q) - 1)?;
            for g in games {
                write!(f, " {:?}(u{}>u{})", g.kind, g.host + 1, g.guest + 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Rotating round-robin over `m` super-teams with kinds and orientations.
///
/// In slot `q` the fixed super-team `u_m` meets `u_{m-q}` and white
/// super-teams `u_i, u_j` meet when `i + j ≡ 2(m-q) (mod m-1)`. A white
/// super-team at position `p = (i - m + q) mod (m-1)` hosts first in a
/// normal game when `p + q` is even. Slot 1 is all normal with `u_m`
/// hosting first; left games host `u_m` first in even slots; in the last
/// slot `u_1` hosts `u_m` and the even label hosts in every other pair.
pub fn build_timetable(m: usize) -> Result<SuperTimetable> {
    if !m.is_multiple_of(2) || m < 4 {
        return Err(Error::UnsupportedSize {
            n: 2 * m,
            reason: "the super-game timetable needs an even number of super-teams, at least 4",
        });
    }
    // 1-based labels inside; converted when games are emitted.
    let game = |slot, kind, host: usize, guest: usize| SuperGame {
        slot,
        kind,
        host: host - 1,
        guest: guest - 1,
    };
    let modulus = (m - 1) as i64;
    let position = |x: usize, q: usize| (x as i64 - m as i64 + q as i64).rem_euclid(modulus);

    let mut slots = Vec::with_capacity(m - 1);
    for q in 1..=m - 2 {
        let mut games = Vec::with_capacity(m / 2);
        let rival = m - q;
        games.push(if q == 1 {
            game(q, GameKind::Normal, m, rival)
        } else if q % 2 == 0 {
            game(q, GameKind::Left, m, rival)
        } else {
            game(q, GameKind::Left, rival, m)
        });
        let target = (2 * (m - q)) as i64 % modulus;
        for i in 1..m {
            for j in i + 1..m {
                if i == rival || j == rival || (i + j) as i64 % modulus != target {
                    continue;
                }
                let i_hosts = (position(i, q) + q as i64) % 2 == 0;
                games.push(if i_hosts {
                    game(q, GameKind::Normal, i, j)
                } else {
                    game(q, GameKind::Normal, j, i)
                });
            }
        }
        slots.push(games);
    }

    let q = m - 1;
    let mut last = vec![game(q, GameKind::Last, 1, m)];
    for i in 2..=m / 2 {
        let j = m + 1 - i;
        let (host, guest) = if i % 2 == 0 { (i, j) } else { (j, i) };
        last.push(game(q, GameKind::Last, host, guest));
    }
    slots.push(last);

    Ok(SuperTimetable { m, slots })
}
