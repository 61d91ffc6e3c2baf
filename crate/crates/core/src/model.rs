//! Per-team, per-day schedule grid, its text and JSON forms, and the
//! feasibility validator.
//!
//! Text form: one row per team, one token per day. `+tX` means the row's
//! team plays at the home venue of team `X`; `-tX` means it hosts `X`.
//! Team numbers in both serialized forms are 1-based.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Venue {
    Home,
    Away,
}

impl Venue {
    pub fn flip(self) -> Self {
        match self {
            Venue::Home => Venue::Away,
            Venue::Away => Venue::Home,
        }
    }
}

/// One team's game on one day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entry {
    pub opponent: usize,
    pub venue: Venue,
}

impl Entry {
    /// Signed 1-based code: `+x` away at `x`, `-x` hosting `x`.
    pub fn signed(self) -> i64 {
        let t = self.opponent as i64 + 1;
        match self.venue {
            Venue::Away => t,
            Venue::Home => -t,
        }
    }

    fn from_signed(code: i64) -> Option<Self> {
        let venue = match code.signum() {
            1 => Venue::Away,
            -1 => Venue::Home,
            _ => return None,
        };
        Some(Self {
            opponent: (code.unsigned_abs() - 1) as usize,
            venue,
        })
    }
}

/// A double round-robin timetable: `grid[team][day]`, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    grid: Vec<Vec<Option<Entry>>>,
}

impl Schedule {
    /// An empty grid with the standard `2(n-1)` days.
    pub fn empty(n: usize) -> Self {
        let days = 2 * n.saturating_sub(1);
        Self {
            n,
            grid: vec![vec![None; days]; n],
        }
    }

    /// Wraps an arbitrary rectangular grid; only the shape is checked, so
    /// the validator can report structural defects.
    pub fn from_grid(grid: Vec<Vec<Option<Entry>>>) -> Result<Self> {
        let n = grid.len();
        let days = grid.first().map_or(0, Vec::len);
        if let Some(bad) = grid.iter().position(|row| row.len() != days) {
            return Err(Error::Decode(format!(
                "row {} has {} days, expected {days}",
                bad + 1,
                grid[bad].len()
            )));
        }
        for (team, row) in grid.iter().enumerate() {
            if let Some(e) = row.iter().flatten().find(|e| e.opponent >= n) {
                return Err(Error::Decode(format!(
                    "team {} lists opponent {} outside 1..={n}",
                    team + 1,
                    e.opponent + 1
                )));
            }
        }
        Ok(Self { n, grid })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn days(&self) -> usize {
        self.grid.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, team: usize, day: usize) -> Option<Entry> {
        self.grid[team][day]
    }

    pub fn row(&self, team: usize) -> &[Option<Entry>] {
        &self.grid[team]
    }

    /// Records `guest` playing at `host`'s venue on `day`.
    pub fn set_game(&mut self, day: usize, host: usize, guest: usize) {
        self.grid[host][day] = Some(Entry {
            opponent: guest,
            venue: Venue::Home,
        });
        self.grid[guest][day] = Some(Entry {
            opponent: host,
            venue: Venue::Away,
        });
    }

    /// Home venue (team index) where `team` plays on `day`, if it plays.
    pub fn location(&self, team: usize, day: usize) -> Option<usize> {
        self.grid[team][day].map(|e| match e.venue {
            Venue::Home => team,
            Venue::Away => e.opponent,
        })
    }

    /// Applies a team relabeling: team `t` becomes `perm[t]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut grid = vec![vec![None; self.days()]; self.n];
        for (t, row) in self.grid.iter().enumerate() {
            grid[perm[t]] = row
                .iter()
                .map(|e| {
                    e.map(|e| Entry {
                        opponent: perm[e.opponent],
                        venue: e.venue,
                    })
                })
                .collect();
        }
        Self { n: self.n, grid }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the text form. Both sides of every game must agree.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut grid = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(parse_token)
                .collect::<Result<Vec<_>>>()?;
            grid.push(row);
        }
        if grid.is_empty() {
            return Err(Error::Decode("no schedule rows".into()));
        }
        let schedule = Self::from_grid(grid)?;
        schedule.check_mirrored()?;
        Ok(schedule)
    }

    fn check_mirrored(&self) -> Result<()> {
        for team in 0..self.n {
            for day in 0..self.days() {
                let Some(e) = self.grid[team][day] else { continue };
                let mirror = Some(Entry {
                    opponent: team,
                    venue: e.venue.flip(),
                });
                if e.opponent == team || self.grid[e.opponent][day] != mirror {
                    return Err(Error::Decode(format!(
                        "day {}: t{} lists {} but t{} does not list the mirrored game",
                        day + 1,
                        team + 1,
                        format_entry(Some(e)),
                        e.opponent + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = ScheduleDoc {
            n: self.n,
            days: self.days(),
            grid: self
                .grid
                .iter()
                .map(|row| row.iter().map(|e| e.map(Entry::signed)).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("schedule document serializes")
    }

    /// Parses the structured form. Mirror consistency is left to
    /// [`validate_schedule`], which reports it as a structural violation.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ScheduleDoc =
            serde_json::from_str(text).map_err(|e| Error::Decode(e.to_string()))?;
        if doc.grid.len() != doc.n {
            return Err(Error::Decode(format!(
                "n is {} but the grid has {} rows",
                doc.n,
                doc.grid.len()
            )));
        }
        let mut grid = Vec::with_capacity(doc.n);
        for row in doc.grid {
            if row.len() != doc.days {
                return Err(Error::Decode(format!(
                    "days is {} but a row has {} entries",
                    doc.days,
                    row.len()
                )));
            }
            let row = row
                .into_iter()
                .map(|code| match code {
                    None => Ok(None),
                    Some(c) => Entry::from_signed(c)
                        .map(Some)
                        .ok_or_else(|| Error::Decode(format!("invalid entry {c}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            grid.push(row);
        }
        Self::from_grid(grid)
    }

    /// Accepts either serialized form.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScheduleDoc {
    n: usize,
    days: usize,
    grid: Vec<Vec<Option<i64>>>,
}

fn format_entry(e: Option<Entry>) -> String {
    match e {
        None => ".".to_string(),
        Some(e) => {
            let sign = match e.venue {
                Venue::Away => '+',
                Venue::Home => '-',
            };
            format!("{sign}t{}", e.opponent + 1)
        }
    }
}

fn parse_token(token: &str) -> Result<Option<Entry>> {
    if token == "." {
        return Ok(None);
    }
    let bad = || Error::Decode(format!("invalid schedule token {token:?}"));
    let (venue, rest) = match token.as_bytes().first() {
        Some(b'+') => (Venue::Away, &token[1..]),
        Some(b'-') => (Venue::Home, &token[1..]),
        _ => return Err(bad()),
    };
    let digits = rest.strip_prefix('t').unwrap_or(rest);
    let t: usize = digits.parse().map_err(|_| bad())?;
    if t == 0 {
        return Err(bad());
    }
    Ok(Some(Entry {
        opponent: t - 1,
        venue,
    }))
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.grid {
            let tokens: Vec<String> = row.iter().map(|&e| format_entry(e)).collect();
            writeln!(f, "{}", tokens.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ViolationKind {
    /// A team pair does not meet exactly once at each venue.
    GameValue,
    /// Wrong day count, or a team without a game on some day.
    GameTime,
    /// Two teams meet on consecutive days.
    NoRepeat,
    /// Three or more consecutive home or away games.
    StreakBound,
    /// The grid is not a consistent set of games.
    Structure,
}

/// One feasibility defect. Teams and days are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub teams: Vec<usize>,
    pub days: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if !self.teams.is_empty() {
            let teams: Vec<String> = self.teams.iter().map(|t| format!("t{}", t + 1)).collect();
            write!(f, " [{}]", teams.join(","))?;
        }
        if let (Some(first), Some(last)) = (self.days.first(), self.days.last()) {
            if first == last {
                write!(f, " day {}", first + 1)?;
            } else {
                write!(f, " days {}-{}", first + 1, last + 1)?;
            }
        }
        write!(f, ": {}", self.detail)
    }
}

/// Checks every feasibility rule and returns all violations found.
pub fn validate_schedule(s: &Schedule) -> Vec<Violation> {
    let n = s.n();
    let days = s.days();
    let mut out = Vec::new();

    if n < 2 || days != 2 * (n - 1) {
        out.push(Violation {
            kind: ViolationKind::GameTime,
            teams: vec![],
            days: vec![],
            detail: format!("{days} days scheduled, a double round-robin of {n} teams needs {}", 2 * n.saturating_sub(1)),
        });
    }

    for team in 0..n {
        for day in 0..days {
            match s.entry(team, day) {
                None => out.push(Violation {
                    kind: ViolationKind::GameTime,
                    teams: vec![team],
                    days: vec![day],
                    detail: "no game scheduled".into(),
                }),
                Some(e) if e.opponent == team => out.push(Violation {
                    kind: ViolationKind::Structure,
                    teams: vec![team],
                    days: vec![day],
                    detail: "team plays itself".into(),
                }),
                Some(e) => {
                    let mirror = s.entry(e.opponent, day);
                    let expected = Entry {
                        opponent: team,
                        venue: e.venue.flip(),
                    };
                    if mirror != Some(expected) {
                        out.push(Violation {
                            kind: ViolationKind::Structure,
                            teams: vec![team, e.opponent],
                            days: vec![day],
                            detail: format!(
                                "t{} lists {} but t{} lists {}",
                                team + 1,
                                format_entry(Some(e)),
                                e.opponent + 1,
                                format_entry(mirror)
                            ),
                        });
                    }
                }
            }
        }
    }

    for team in 0..n {
        let mut home = vec![0usize; n];
        let mut away = vec![0usize; n];
        for e in s.row(team).iter().flatten() {
            match e.venue {
                Venue::Home => home[e.opponent] += 1,
                Venue::Away => away[e.opponent] += 1,
            }
        }
        for opp in (0..n).filter(|&o| o != team) {
            if home[opp] != 1 || away[opp] != 1 {
                out.push(Violation {
                    kind: ViolationKind::GameValue,
                    teams: vec![team, opp],
                    days: vec![],
                    detail: format!(
                        "t{} hosts t{} {} time(s) and visits it {} time(s), expected once each",
                        team + 1,
                        opp + 1,
                        home[opp],
                        away[opp]
                    ),
                });
            }
        }
    }

    let mut repeats = BTreeSet::new();
    for team in 0..n {
        for day in 1..days {
            if let (Some(a), Some(b)) = (s.entry(team, day - 1), s.entry(team, day)) {
                if a.opponent == b.opponent && a.opponent != team {
                    repeats.insert((team.min(a.opponent), team.max(a.opponent), day - 1));
                }
            }
        }
    }
    out.extend(repeats.into_iter().map(|(a, b, day)| Violation {
        kind: ViolationKind::NoRepeat,
        teams: vec![a, b],
        days: vec![day, day + 1],
        detail: "teams meet on consecutive days".into(),
    }));

    for team in 0..n {
        let row = s.row(team);
        let mut start = 0;
        while start < days {
            let venue = row[start].map(|e| e.venue);
            let mut end = start + 1;
            while end < days && row[end].map(|e| e.venue) == venue {
                end += 1;
            }
            if let Some(v) = venue {
                if end - start >= 3 {
                    out.push(Violation {
                        kind: ViolationKind::StreakBound,
                        teams: vec![team],
                        days: (start..end).collect(),
                        detail: format!(
                            "{} consecutive {} games",
                            end - start,
                            if v == Venue::Home { "home" } else { "away" }
                        ),
                    });
                }
            }
            start = end;
        }
    }

    out
}
