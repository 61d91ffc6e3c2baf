//! Expansion of super-games into concrete games.
//!
//! A normal or left super-game becomes 8 games over 4 days, a last
//! super-game 12 games over 6 days. Every team starts and ends each block
//! at home, so blocks can be costed independently.

use crate::cost::itinerary_cost;
use crate::error::{Error, Result};
use crate::instance::DistanceMatrix;
use crate::model::Schedule;
use crate::superplan::{build_layout, build_timetable, GameKind, SuperGame, SuperLayout, SuperTeam, SuperTimetable};

/// `guest` plays at `host`'s venue on `day` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Game {
    pub day: usize,
    pub host: usize,
    pub guest: usize,
}

fn games(start: usize, template: &[(usize, usize, usize)]) -> Vec<Game> {
    template
        .iter()
        .map(|&(offset, host, guest)| Game {
            day: start + offset,
            host,
            guest,
        })
        .collect()
}

/// Normal block: `a` hosts on the first two days (HHAA), `b` on the last two.
pub fn expand_normal(a: SuperTeam, b: SuperTeam, start: usize) -> Vec<Game> {
    let [a1, a2] = a.members();
    let [b1, b2] = b.members();
    games(
        start,
        &[
            (0, a1, b1),
            (0, a2, b2),
            (1, a1, b2),
            (1, a2, b1),
            (2, b1, a1),
            (2, b2, a2),
            (3, b2, a1),
            (3, b1, a2),
        ],
    )
}

/// Left block of slot `q` between the fixed super-team and `other`. The
/// fixed side plays HAAH in even slots and AHHA in odd slots.
pub fn expand_left(fixed: SuperTeam, other: SuperTeam, start: usize, q: usize) -> Vec<Game> {
    if q.is_multiple_of(2) {
        left_block(fixed, other, start)
    } else {
        left_block(other, fixed, start)
    }
}

// `x` plays HAAH, `y` plays AHHA.
fn left_block(x: SuperTeam, y: SuperTeam, start: usize) -> Vec<Game> {
    let [x1, x2] = x.members();
    let [y1, y2] = y.members();
    games(
        start,
        &[
            (0, x1, y1),
            (0, x2, y2),
            (1, y2, x1),
            (1, y1, x2),
            (2, y1, x1),
            (2, y2, x2),
            (3, x1, y2),
            (3, x2, y1),
        ],
    )
}

/// Last block: six days in which the two super-teams meet and the partners
/// inside each super-team meet each other twice.
pub fn expand_last(a: SuperTeam, b: SuperTeam, start: usize) -> Vec<Game> {
    let [a1, a2] = a.members();
    let [b1, b2] = b.members();
    games(
        start,
        &[
            (0, a1, b1),
            (0, a2, b2),
            (1, a2, a1),
            (1, b2, b1),
            (2, a1, b2),
            (2, b1, a2),
            (3, b1, a1),
            (3, b2, a2),
            (4, b2, a1),
            (4, a2, b1),
            (5, a1, a2),
            (5, b1, b2),
        ],
    )
}

/// Concrete games of one super-game under `teams` (indexed by label).
pub fn block_games(game: &SuperGame, teams: &[SuperTeam]) -> Vec<Game> {
    let start = SuperTimetable::start_day(game.slot);
    let (host, guest) = (teams[game.host], teams[game.guest]);
    match game.kind {
        GameKind::Normal => expand_normal(host, guest, start),
        GameKind::Left => left_block(host, guest, start),
        GameKind::Last => expand_last(host, guest, start),
    }
}

/// Schedule, layout and timetable produced by the construction.
#[derive(Debug, Clone)]
pub struct Construction {
    pub schedule: Schedule,
    pub layout: SuperLayout,
    pub timetable: SuperTimetable,
}

/// Full construction: layout from the two matchings, timetable, expansion.
pub fn build_schedule(dm: &DistanceMatrix) -> Result<Construction> {
    let layout = build_layout(dm)?;
    let timetable = build_timetable(layout.m())?;
    let schedule = build_schedule_with_layout(&layout, &timetable)?;
    Ok(Construction {
        schedule,
        layout,
        timetable,
    })
}

/// Expands `timetable` using the given labeling.
pub fn build_schedule_with_layout(layout: &SuperLayout, timetable: &SuperTimetable) -> Result<Schedule> {
    let m = layout.m();
    let n = 2 * m;
    if m != timetable.m() {
        return Err(Error::Layout(format!(
            "layout has {m} super-teams but the timetable has {}",
            timetable.m()
        )));
    }
    if !n.is_multiple_of(4) || n < 8 {
        return Err(Error::UnsupportedSize {
            n,
            reason: "the super-team construction requires n >= 8 and n ≡ 0 (mod 4)",
        });
    }
    let mut schedule = Schedule::empty(n);
    for game in timetable.games() {
        for g in block_games(game, layout.teams()) {
            schedule.set_game(g.day, g.host, g.guest);
        }
    }
    Ok(schedule)
}

const N4_PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

/// Minimum-distance feasible schedule for four teams by exhaustive search.
/// Ties go to the first schedule in enumeration order.
pub fn solve_n4(dm: &DistanceMatrix) -> Result<Schedule> {
    if dm.n() != 4 {
        return Err(Error::UnsupportedSize {
            n: dm.n(),
            reason: "exhaustive search is only used for n = 4",
        });
    }
    let mut search = N4Search {
        dm,
        used: [[false; 4]; 4],
        day_games: Vec::with_capacity(6),
        best: None,
    };
    search.run(None);
    let (_, schedule) = search.best.expect("four teams always admit a feasible TTP-2 schedule");
    Ok(schedule)
}

struct N4Search<'a> {
    dm: &'a DistanceMatrix,
    used: [[bool; 4]; 4],
    day_games: Vec<[(usize, usize); 2]>,
    best: Option<(i64, Schedule)>,
}

impl N4Search<'_> {
    fn run(&mut self, prev_pairing: Option<usize>) {
        if self.day_games.len() == 6 {
            let mut s = Schedule::empty(4);
            for (day, games) in self.day_games.iter().enumerate() {
                for &(host, guest) in games {
                    s.set_game(day, host, guest);
                }
            }
            if !streaks_ok(&s) {
                return;
            }
            let cost = itinerary_cost(&s, self.dm).total;
            if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                self.best = Some((cost, s));
            }
            return;
        }
        for (p, pairing) in N4_PAIRINGS.iter().enumerate() {
            // Consecutive days with the same pairing repeat both games.
            if prev_pairing == Some(p) {
                continue;
            }
            for orient in 0..4 {
                let games = [0, 1].map(|k| {
                    let (x, y) = pairing[k];
                    if orient >> k & 1 == 0 {
                        (x, y)
                    } else {
                        (y, x)
                    }
                });
                if games.iter().any(|&(h, g)| self.used[h][g]) {
                    continue;
                }
                for &(h, g) in &games {
                    self.used[h][g] = true;
                }
                self.day_games.push(games);
                self.run(Some(p));
                self.day_games.pop();
                for &(h, g) in &games {
                    self.used[h][g] = false;
                }
            }
        }
    }
}

fn streaks_ok(s: &Schedule) -> bool {
    (0..s.n()).all(|t| {
        s.row(t)
            .windows(3)
            .all(|w| !(w[0].map(|e| e.venue) == w[1].map(|e| e.venue) && w[1].map(|e| e.venue) == w[2].map(|e| e.venue)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_schedule;

    const TABLE1: &str = include_str!("../tests/fixtures/table1.txt");

    fn st(a: usize, b: usize) -> SuperTeam {
        SuperTeam::new(a - 1, b - 1)
    }

    fn fixture_games(days: std::ops::Range<usize>, teams: &[usize]) -> Vec<(usize, usize, usize)> {
        let table = Schedule::from_text(TABLE1).unwrap();
        let mut out = Vec::new();
        for day in days {
            for &t in teams {
                let e = table.entry(t - 1, day - 1).unwrap();
                if e.venue == crate::model::Venue::Home {
                    out.push((day - 1, t - 1, e.opponent));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn sorted(games: Vec<Game>) -> Vec<(usize, usize, usize)> {
        let mut v: Vec<_> = games.into_iter().map(|g| (g.day, g.host, g.guest)).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn normal_block_matches_table1() {
        assert_eq!(
            sorted(expand_normal(st(1, 2), st(3, 4), 0)),
            fixture_games(1..5, &[1, 2, 3, 4])
        );
    }

    #[test]
    fn left_block_matches_table1() {
        assert_eq!(
            sorted(expand_left(st(7, 8), st(3, 4), 4, 2)),
            fixture_games(5..9, &[3, 4, 7, 8])
        );
    }

    #[test]
    fn last_blocks_match_table1() {
        assert_eq!(
            sorted(expand_last(st(1, 2), st(7, 8), 8)),
            fixture_games(9..15, &[1, 2, 7, 8])
        );
        assert_eq!(
            sorted(expand_last(st(3, 4), st(5, 6), 8)),
            fixture_games(9..15, &[3, 4, 5, 6])
        );
    }

    #[test]
    fn left_orientation_follows_slot_parity() {
        let pattern = |games: &[Game], team: usize| -> String {
            let mut days: Vec<_> = games.iter().filter(|g| g.host == team || g.guest == team).collect();
            days.sort_by_key(|g| g.day);
            days.iter().map(|g| if g.host == team { 'H' } else { 'A' }).collect()
        };
        let even = expand_left(st(7, 8), st(3, 4), 0, 2);
        assert_eq!(pattern(&even, 6), "HAAH");
        assert_eq!(pattern(&even, 2), "AHHA");
        let odd = expand_left(st(7, 8), st(3, 4), 0, 3);
        assert_eq!(pattern(&odd, 6), "AHHA");
        assert_eq!(pattern(&odd, 2), "HAAH");
        let normal = expand_normal(st(1, 2), st(3, 4), 0);
        assert_eq!(pattern(&normal, 1), "HHAA");
        assert_eq!(pattern(&normal, 3), "AAHH");
    }

    #[test]
    fn identity_layout_reproduces_table1() {
        let dm = DistanceMatrix::worst_case(8).unwrap();
        let layout = SuperLayout::identity(&dm).unwrap();
        let timetable = build_timetable(4).unwrap();
        let s = build_schedule_with_layout(&layout, &timetable).unwrap();
        assert_eq!(s.to_text(), TABLE1);
    }

    #[test]
    fn constructed_schedules_are_feasible() {
        for n in (8..=24).step_by(4) {
            for seed in 0..3 {
                let dm = DistanceMatrix::random_metric(n, seed).unwrap();
                let c = build_schedule(&dm).unwrap();
                assert_eq!(c.schedule.days(), 2 * n - 2);
                let v = validate_schedule(&c.schedule);
                assert!(v.is_empty(), "n={n} seed={seed}: {v:?}");
            }
        }
    }

    #[test]
    fn unsupported_sizes() {
        let dm = DistanceMatrix::random_metric(10, 0).unwrap();
        assert!(matches!(build_schedule(&dm), Err(Error::UnsupportedSize { n: 10, .. })));
        let dm = DistanceMatrix::random_metric(8, 0).unwrap();
        assert!(solve_n4(&dm).is_err());
    }

    #[test]
    fn n4_solution_is_feasible() {
        let dm = DistanceMatrix::from_fn(4, |i, j| i64::from(i != j)).unwrap();
        let s = solve_n4(&dm).unwrap();
        assert!(validate_schedule(&s).is_empty());
    }
}
