//! Travel simulation, the independent lower bound, and extra-cost accounting.
//!
//! A team's optimal itinerary visits its matching partner alone and every
//! other matched pair on one two-stop road trip, costing `D_i + D_M`. The
//! extra cost of a block is what the block's road trips cost beyond the
//! coincident trips of the optimal itinerary.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expander::{block_games, Game};
use crate::instance::DistanceMatrix;
use crate::matching::{min_perfect_matching, PairMatching};
use crate::model::{Schedule, Venue};
use crate::superplan::{super_distance, GameKind, SuperGame, SuperLayout, SuperTeam, SuperTimetable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItineraryCost {
    pub total: i64,
    pub per_team: Vec<i64>,
}

/// Distance travelled by every team: from home through each day's venue
/// and back home. Days without a game leave the team where it is.
pub fn itinerary_cost(s: &Schedule, dm: &DistanceMatrix) -> ItineraryCost {
    let per_team: Vec<i64> = (0..s.n())
        .map(|team| {
            let mut at = team;
            let mut dist = 0;
            for day in 0..s.days() {
                if let Some(next) = s.location(team, day) {
                    dist += dm.get(at, next);
                    at = next;
                }
            }
            dist + dm.get(at, team)
        })
        .collect();
    ItineraryCost {
        total: per_team.iter().sum(),
        per_team,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    /// `2·D_G + n·D_M`.
    pub lb: i64,
    /// `D_i + D_M` for each team.
    pub per_team: Vec<i64>,
    pub d_g: i64,
    pub matching: PairMatching,
}

impl LowerBound {
    pub fn d_m(&self) -> i64 {
        self.matching.weight()
    }
}

pub fn independent_lower_bound(dm: &DistanceMatrix) -> Result<LowerBound> {
    let matching = min_perfect_matching(dm)?;
    let d_m = matching.weight();
    let per_team: Vec<i64> = (0..dm.n()).map(|i| dm.row_sum(i) + d_m).collect();
    let d_g = dm.total_weight();
    let lb = 2 * d_g + dm.n() as i64 * d_m;
    debug_assert_eq!(lb, per_team.iter().sum::<i64>());
    Ok(LowerBound {
        lb,
        per_team,
        d_g,
        matching,
    })
}

/// A simple cycle from a team's home through `stops` and back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoadTrip {
    pub stops: Vec<usize>,
    pub cost: i64,
}

fn trip(dm: &DistanceMatrix, home: usize, stops: Vec<usize>) -> RoadTrip {
    let mut at = home;
    let mut cost = 0;
    for &s in &stops {
        cost += dm.get(at, s);
        at = s;
    }
    cost += dm.get(at, home);
    RoadTrip { stops, cost }
}

/// Road trips achieving `LB_i`: the partner alone first, then each other
/// matched pair in order of its smaller member. `partners[t]` is `t`'s mate.
pub fn optimal_itinerary(team: usize, partners: &[usize], dm: &DistanceMatrix) -> Vec<RoadTrip> {
    let mut trips = vec![trip(dm, team, vec![partners[team]])];
    for t in 0..partners.len() {
        let p = partners[t];
        if t < p && t != team && p != team {
            trips.push(trip(dm, team, vec![t, p]));
        }
    }
    trips
}

/// Cost of the optimal itinerary's trips that cover exactly `visited`.
fn coincident_optimal(team: usize, visited: &[usize], partners: &[usize], dm: &DistanceMatrix) -> Result<i64> {
    let mut cost = 0;
    for &v in visited {
        let p = partners[v];
        if v == partners[team] {
            cost += 2 * dm.get(team, v);
        } else if !visited.contains(&p) {
            return Err(Error::Inconsistent(format!(
                "t{} visits t{} without its partner t{} inside one block",
                team + 1,
                v + 1,
                p + 1
            )));
        } else if v < p {
            cost += dm.get(team, v) + dm.get(v, p) + dm.get(p, team);
        }
    }
    Ok(cost)
}

/// Extra cost of the four teams of one block, from the block's own games.
fn block_extra(games: &[Game], teams: [SuperTeam; 2], partners: &[usize], dm: &DistanceMatrix) -> Result<i64> {
    let mut extra = 0;
    for team in teams.iter().flat_map(|s| s.members()) {
        let mut mine: Vec<&Game> = games.iter().filter(|g| g.host == team || g.guest == team).collect();
        mine.sort_by_key(|g| g.day);
        let venues: Vec<usize> = mine.iter().map(|g| g.host).collect();
        let visited: Vec<usize> = venues.iter().copied().filter(|&v| v != team).collect();
        let mut at = team;
        let mut actual = 0;
        for &v in &venues {
            actual += dm.get(at, v);
            at = v;
        }
        actual += dm.get(at, team);
        extra += actual - coincident_optimal(team, &visited, partners, dm)?;
    }
    Ok(extra)
}

/// Extra cost of one super-game under the labeling `teams`, by simulating
/// the block's trips.
pub fn super_game_extra(game: &SuperGame, teams: &[SuperTeam], partners: &[usize], dm: &DistanceMatrix) -> Result<i64> {
    let games = block_games(game, teams);
    block_extra(&games, [teams[game.host], teams[game.guest]], partners, dm)
}

/// Left block where `haah` plays HAAH: only the AHHA side travels extra.
pub fn left_extra_closed_form(haah: SuperTeam, ahha: SuperTeam, dm: &DistanceMatrix) -> i64 {
    super_distance(dm, haah, ahha) - 2 * dm.get(haah.first, haah.second)
}

/// Last block with first-day host `a`: only the `b` side travels extra.
pub fn last_extra_closed_form(a: SuperTeam, b: SuperTeam, dm: &DistanceMatrix) -> i64 {
    let [a1, a2] = a.members();
    let [b1, b2] = b.members();
    2 * dm.get(a1, b2) + dm.get(a2, b1) + dm.get(a2, b2) - 2 * dm.get(a1, a2) - dm.get(b1, b2)
}

fn closed_form(game: &SuperGame, teams: &[SuperTeam], dm: &DistanceMatrix) -> i64 {
    let (h, g) = (teams[game.host], teams[game.guest]);
    match game.kind {
        GameKind::Normal => 0,
        GameKind::Left => left_extra_closed_form(h, g, dm),
        GameKind::Last => last_extra_closed_form(h, g, dm),
    }
}

/// Sum of the extra costs of all left and last blocks under `teams`.
/// Normal blocks cost nothing extra by construction.
pub fn extras_total(timetable: &SuperTimetable, teams: &[SuperTeam], partners: &[usize], dm: &DistanceMatrix) -> Result<i64> {
    let mut sum = 0;
    for game in timetable.games().filter(|g| g.kind != GameKind::Normal) {
        sum += super_game_extra(game, teams, partners, dm)?;
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCost {
    pub slot: usize,
    pub kind: GameKind,
    pub host: usize,
    pub guest: usize,
    pub extra: i64,
    /// `D(u_host, u_guest)`, the bound on `extra` for metric instances.
    pub superdist: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub n: usize,
    pub lb: i64,
    pub per_team_lb: Vec<i64>,
    pub total: i64,
    pub per_team_total: Vec<i64>,
    pub blocks: Vec<BlockCost>,
    /// Super-distance covered by left games, `Σ_{i=2}^{m-2} D(u_m, u_i)`.
    pub e1: i64,
    /// Super-distance covered by last games, `Σ D(u_i, u_{m+1-i})`.
    pub e2: i64,
    pub d_m: i64,
    pub d_h: i64,
    pub d_mh: i64,
}

impl CostReport {
    pub fn extra_total(&self) -> i64 {
        self.blocks.iter().map(|b| b.extra).sum()
    }

    /// `total / lb`, if the bound is positive.
    pub fn ratio(&self) -> Option<Ratio<i64>> {
        (self.lb > 0).then(|| Ratio::new(self.total, self.lb))
    }

    pub fn gap(&self) -> Option<Ratio<i64>> {
        (self.lb > 0).then(|| Ratio::new(self.total - self.lb, self.lb))
    }

    /// Whether `total <= (1 + 3/n - 6/(n(n-2))) · lb`.
    pub fn within_ratio_bound(&self) -> bool {
        within_ratio_bound(self.n, self.total, self.lb)
    }
}

/// `1 + 3/n - 6/(n(n-2))` for `n >= 4`.
pub fn ratio_bound(n: usize) -> Ratio<i64> {
    let n = n as i64;
    Ratio::new(n * (n - 2) + 3 * (n - 2) - 6, n * (n - 2))
}

pub fn within_ratio_bound(n: usize, total: i64, lb: i64) -> bool {
    let b = ratio_bound(n);
    i128::from(total) * i128::from(*b.denom()) <= i128::from(*b.numer()) * i128::from(lb)
}

/// The three terms of the extra-cost bound chain:
/// `e1 + e2`, `D_{M_H} + 2(m-3)(D_H - D_{M_H})/(m(m-2))` and
/// `(3/n - 6/(n(n-2))) · lb`. For the constructed layout on a metric
/// instance they are non-decreasing.
pub fn bound_chain(report: &CostReport) -> [Ratio<i64>; 3] {
    let n = report.n as i64;
    let m = n / 2;
    let lhs = Ratio::from_integer(report.e1 + report.e2);
    let mid = Ratio::from_integer(report.d_mh) + Ratio::new(2 * (m - 3) * (report.d_h - report.d_mh), m * (m - 2));
    let rhs = (ratio_bound(report.n) - 1) * report.lb;
    [lhs, mid, rhs]
}

/// Costs every block of a constructed schedule by simulating its trips and
/// checks `total = lb + Σ extras`.
pub fn extra_cost_accounting(
    s: &Schedule,
    layout: &SuperLayout,
    timetable: &SuperTimetable,
    dm: &DistanceMatrix,
) -> Result<CostReport> {
    let lower = independent_lower_bound(dm)?;
    let travel = itinerary_cost(s, dm);
    let partners = layout.partners();
    let matched_weight: i64 = layout.teams().iter().map(|t| dm.get(t.first, t.second)).sum();
    if matched_weight != lower.d_m() {
        return Err(Error::Inconsistent(format!(
            "layout pairs weigh {matched_weight}, the minimum matching weighs {}",
            lower.d_m()
        )));
    }

    let mut blocks = Vec::new();
    for game in timetable.games() {
        let start = SuperTimetable::start_day(game.slot);
        let days = start..start + timetable.days_in_slot(game.slot);
        let (h, g) = (layout.team(game.host), layout.team(game.guest));
        let games: Vec<Game> = [h, g]
            .iter()
            .flat_map(|st| st.members())
            .flat_map(|team| {
                days.clone().filter_map(move |day| {
                    s.entry(team, day)
                        .filter(|e| e.venue == Venue::Home)
                        .map(|e| Game {
                            day,
                            host: team,
                            guest: e.opponent,
                        })
                })
            })
            .collect();
        let extra = block_extra(&games, [h, g], &partners, dm)?;
        debug_assert_eq!(extra, closed_form(game, layout.teams(), dm), "closed form disagrees for {game:?}");
        blocks.push(BlockCost {
            slot: game.slot,
            kind: game.kind,
            host: game.host,
            guest: game.guest,
            extra,
            superdist: layout.superdist().get(game.host, game.guest),
        });
    }

    let report = CostReport {
        n: dm.n(),
        lb: lower.lb,
        per_team_lb: lower.per_team,
        total: travel.total,
        per_team_total: travel.per_team,
        blocks,
        e1: layout.left_slot_weight(),
        e2: layout.last_slot_weight(),
        d_m: lower.matching.weight(),
        d_h: layout.total_superdistance(),
        d_mh: min_perfect_matching(layout.superdist())?.weight(),
    };
    if report.total != report.lb + report.extra_total() {
        return Err(Error::Inconsistent(format!(
            "simulated total {} != lower bound {} + block extras {}",
            report.total,
            report.lb,
            report.extra_total()
        )));
    }
    Ok(report)
}

/// Report for a schedule outside the super-team construction (n = 4):
/// only the simulated total and the lower bound are meaningful.
pub fn plain_report(s: &Schedule, dm: &DistanceMatrix) -> Result<CostReport> {
    let lower = independent_lower_bound(dm)?;
    let travel = itinerary_cost(s, dm);
    Ok(CostReport {
        n: dm.n(),
        lb: lower.lb,
        per_team_lb: lower.per_team,
        total: travel.total,
        per_team_total: travel.per_team,
        blocks: Vec::new(),
        e1: 0,
        e2: 0,
        d_m: lower.matching.weight(),
        d_h: dm.total_weight() - lower.matching.weight(),
        d_mh: 0,
    })
}

/// `num/den` rounded half-up to `places` decimals.
pub fn format_decimal(value: Ratio<i64>, places: u32) -> String {
    let scale = 10i128.pow(places);
    let num = i128::from(*value.numer());
    let den = i128::from(*value.denom());
    let scaled = num * scale;
    let mut q = scaled.div_euclid(den);
    if 2 * scaled.rem_euclid(den) >= den {
        q += 1;
    }
    let sign = if q < 0 { "-" } else { "" };
    let q = q.abs();
    if places == 0 {
        return format!("{sign}{q}");
    }
    format!("{sign}{}.{:0width$}", q / scale, q % scale, width = places as usize)
}
