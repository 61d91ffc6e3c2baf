//! Post-construction improvement by relabeling.
//!
//! Two moves keep the timetable and only change which teams fill it:
//! exchanging the labels of two super-teams, and reordering the two teams
//! inside the super-teams of each last game. Both preserve feasibility
//! because feasibility depends only on the timetable's patterns.

use crate::cost::{extra_cost_accounting, extras_total, plain_report, super_game_extra, CostReport};
use crate::error::Result;
use crate::expander::{build_schedule, build_schedule_with_layout, solve_n4, Construction};
use crate::instance::DistanceMatrix;
use crate::model::Schedule;
use crate::superplan::{GameKind, SuperLayout, SuperTeam, SuperTimetable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Labels `u_{a+1}` and `u_{b+1}` exchanged.
    SwapLabels(usize, usize),
    /// Teams inside `u_{k+1}` exchanged.
    FlipOrder(usize),
}

impl Move {
    pub fn apply(self, teams: &mut [SuperTeam]) {
        match self {
            Move::SwapLabels(a, b) => teams.swap(a, b),
            Move::FlipOrder(k) => teams[k] = teams[k].flipped(),
        }
    }
}

/// Accepted moves and the block-extra total after each one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchTrace {
    pub moves: Vec<Move>,
    pub extras: Vec<i64>,
}

impl SearchTrace {
    fn push(&mut self, mv: Move, extra: i64) {
        self.moves.push(mv);
        self.extras.push(extra);
    }
}

/// A constructed schedule with everything needed to improve or report it.
#[derive(Debug, Clone)]
pub struct Solution {
    pub schedule: Schedule,
    pub layout: SuperLayout,
    pub timetable: SuperTimetable,
    pub report: CostReport,
}

impl Solution {
    pub fn construct(dm: &DistanceMatrix) -> Result<Self> {
        let Construction {
            schedule,
            layout,
            timetable,
        } = build_schedule(dm)?;
        let report = extra_cost_accounting(&schedule, &layout, &timetable, dm)?;
        Ok(Self {
            schedule,
            layout,
            timetable,
            report,
        })
    }

    pub fn from_layout(dm: &DistanceMatrix, layout: SuperLayout, timetable: SuperTimetable) -> Result<Self> {
        let schedule = build_schedule_with_layout(&layout, &timetable)?;
        let report = extra_cost_accounting(&schedule, &layout, &timetable, dm)?;
        Ok(Self {
            schedule,
            layout,
            timetable,
            report,
        })
    }

    pub fn total(&self) -> i64 {
        self.report.total
    }
}

/// First-improvement search over label exchanges. Pairs `(a, b)` are
/// scanned in lexicographic order; the first strictly improving exchange is
/// applied and the scan restarts, until no exchange improves.
pub fn swap_super_teams(
    dm: &DistanceMatrix,
    layout: &SuperLayout,
    timetable: &SuperTimetable,
) -> Result<(SuperLayout, SearchTrace)> {
    let partners = layout.partners();
    let mut teams = layout.teams().to_vec();
    let mut current = extras_total(timetable, &teams, &partners, dm)?;
    let mut trace = SearchTrace::default();
    let m = teams.len();
    'scan: loop {
        for a in 0..m {
            for b in a + 1..m {
                teams.swap(a, b);
                let candidate = extras_total(timetable, &teams, &partners, dm)?;
                if candidate < current {
                    current = candidate;
                    trace.push(Move::SwapLabels(a, b), current);
                    continue 'scan;
                }
                teams.swap(a, b);
            }
        }
        break;
    }
    Ok((SuperLayout::from_teams(dm, teams)?, trace))
}

/// Picks, for every last game independently, the cheapest of the four
/// orderings of the teams inside its two super-teams. The current order
/// wins ties.
pub fn swap_within_pairs(
    dm: &DistanceMatrix,
    layout: &SuperLayout,
    timetable: &SuperTimetable,
) -> Result<(SuperLayout, SearchTrace)> {
    let partners = layout.partners();
    let mut teams = layout.teams().to_vec();
    let mut total = extras_total(timetable, &teams, &partners, dm)?;
    let mut trace = SearchTrace::default();
    let last_slot = timetable.m() - 1;
    for game in timetable.slot(last_slot).iter().filter(|g| g.kind == GameKind::Last) {
        let base = super_game_extra(game, &teams, &partners, dm)?;
        let mut best = (base, false, false);
        for (flip_host, flip_guest) in [(false, true), (true, false), (true, true)] {
            let mut trial = teams.clone();
            if flip_host {
                trial[game.host] = trial[game.host].flipped();
            }
            if flip_guest {
                trial[game.guest] = trial[game.guest].flipped();
            }
            let extra = super_game_extra(game, &trial, &partners, dm)?;
            if extra < best.0 {
                best = (extra, flip_host, flip_guest);
            }
        }
        let (extra, flip_host, flip_guest) = best;
        total += extra - base;
        for (flip, label) in [(flip_host, game.host), (flip_guest, game.guest)] {
            if flip {
                Move::FlipOrder(label).apply(&mut teams);
                trace.push(Move::FlipOrder(label), total);
            }
        }
    }
    debug_assert_eq!(total, extras_total(timetable, &teams, &partners, dm)?);
    Ok((SuperLayout::from_teams(dm, teams)?, trace))
}

/// Alternates label exchanges (to a fixpoint) and intra-pair reordering
/// until neither move improves, so the result is a fixpoint of both.
pub fn improve(dm: &DistanceMatrix, solution: &Solution) -> Result<(Solution, SearchTrace)> {
    let mut layout = solution.layout.clone();
    let mut trace = SearchTrace::default();
    loop {
        let (swapped, t1) = swap_super_teams(dm, &layout, &solution.timetable)?;
        let (flipped, t2) = swap_within_pairs(dm, &swapped, &solution.timetable)?;
        trace.moves.extend(t1.moves.into_iter().chain(t2.moves.iter().copied()));
        trace.extras.extend(t1.extras.into_iter().chain(t2.extras.iter().copied()));
        layout = flipped;
        if t2.moves.is_empty() {
            break;
        }
    }
    Ok((Solution::from_layout(dm, layout, solution.timetable.clone())?, trace))
}

/// Result of the full pipeline on one instance.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub schedule: Schedule,
    pub report: CostReport,
    /// Total before local search.
    pub before: i64,
    /// The labeled construction; `None` for the exhaustive `n = 4` case.
    pub solution: Option<Solution>,
}

/// Builds a schedule for any supported `n` and optionally improves it.
pub fn solve(dm: &DistanceMatrix, local_search: bool) -> Result<Outcome> {
    if dm.n() == 4 {
        let schedule = solve_n4(dm)?;
        let report = plain_report(&schedule, dm)?;
        return Ok(Outcome {
            before: report.total,
            schedule,
            report,
            solution: None,
        });
    }
    let constructed = Solution::construct(dm)?;
    let before = constructed.total();
    let solution = if local_search {
        improve(dm, &constructed)?.0
    } else {
        constructed
    };
    Ok(Outcome {
        schedule: solution.schedule.clone(),
        report: solution.report.clone(),
        before,
        solution: Some(solution),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_schedule;

    #[test]
    fn worst_case_has_nothing_to_improve() {
        let dm = DistanceMatrix::worst_case(12).unwrap();
        let s = Solution::construct(&dm).unwrap();
        let (swapped, t) = swap_super_teams(&dm, &s.layout, &s.timetable).unwrap();
        assert!(t.moves.is_empty());
        assert_eq!(swapped, s.layout);
        let (flipped, t) = swap_within_pairs(&dm, &s.layout, &s.timetable).unwrap();
        assert!(t.moves.is_empty());
        assert_eq!(flipped, s.layout);
    }

    #[test]
    fn improvement_is_monotone_and_feasible() {
        for seed in 0..8 {
            let dm = DistanceMatrix::random_metric(16, seed).unwrap();
            let s = Solution::construct(&dm).unwrap();
            let (better, trace) = improve(&dm, &s).unwrap();
            assert!(better.total() <= s.total());
            assert!(validate_schedule(&better.schedule).is_empty());
            let mut prev = s.total() - s.report.lb;
            for &e in &trace.extras {
                assert!(e <= prev);
                prev = e;
            }
            assert_eq!(better.total(), better.report.lb + trace.extras.last().copied().unwrap_or(s.total() - s.report.lb));
        }
    }

    #[test]
    fn intra_pair_flips_only_touch_last_blocks() {
        for seed in 0..8 {
            let dm = DistanceMatrix::random_metric(20, seed).unwrap();
            let s = Solution::construct(&dm).unwrap();
            let (flipped, _) = swap_within_pairs(&dm, &s.layout, &s.timetable).unwrap();
            let after = Solution::from_layout(&dm, flipped, s.timetable.clone()).unwrap();
            assert!(after.total() <= s.total());
            for (a, b) in s.report.blocks.iter().zip(&after.report.blocks) {
                if a.kind != GameKind::Last {
                    assert_eq!(a.extra, b.extra);
                }
            }
            assert_eq!(after.report.e1, s.report.e1);
        }
    }

    #[test]
    fn improve_is_idempotent() {
        for seed in 0..5 {
            let dm = DistanceMatrix::random_metric(12, seed).unwrap();
            let s = Solution::construct(&dm).unwrap();
            let (once, _) = improve(&dm, &s).unwrap();
            let (twice, trace) = improve(&dm, &once).unwrap();
            assert!(trace.moves.is_empty());
            assert_eq!(once.total(), twice.total());
        }
    }

    #[test]
    fn n4_goes_through_exhaustive_search() {
        let dm = DistanceMatrix::worst_case(4).unwrap();
        let out = solve(&dm, true).unwrap();
        assert!(out.solution.is_none());
        assert!(validate_schedule(&out.schedule).is_empty());
        assert_eq!(out.before, out.report.total);
    }
}
