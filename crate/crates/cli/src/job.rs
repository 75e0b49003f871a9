//! Job specifications: one command with its inputs, as a line of
//! `key=value` tokens after the command name.
//!
//! ```text
//! homology algebra=A3 p=1 q=1,2 hw=0,0,0
//! splitting algebra=A3 p=1 q=1,2 hw=0,0,0 degree=0 seed=7 out=report.json
//! ```

use std::collections::BTreeMap;
use std::fmt;

use bgg_core::parabolic::{parse_algebra, PairSpec};
use bgg_core::rational::{display_q, parse_q};
use bgg_core::rootdata::{NodeSet, Weight};
use bgg_core::{BggError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Rootsys,
    Hasse,
    Orbit,
    Homology,
    Spectrum,
    KostantCheck,
    Kunneth,
    Splitting,
    Qop,
    Compressed,
    Insertion,
    Pathgeom,
    Selftest,
}

pub const COMMANDS: [Command; 13] = [
    Command::Rootsys,
    Command::Hasse,
    Command::Orbit,
    Command::Homology,
    Command::Spectrum,
    Command::KostantCheck,
    Command::Kunneth,
    Command::Splitting,
    Command::Qop,
    Command::Compressed,
    Command::Insertion,
    Command::Pathgeom,
    Command::Selftest,
];

/// How a command uses the algebra, the parabolics and the weight.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Need {
    No,
    Optional,
    Required,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rootsys => "rootsys",
            Command::Hasse => "hasse",
            Command::Orbit => "orbit",
            Command::Homology => "homology",
            Command::Spectrum => "spectrum",
            Command::KostantCheck => "kostant-check",
            Command::Kunneth => "kunneth",
            Command::Splitting => "splitting",
            Command::Qop => "qop",
            Command::Compressed => "compressed",
            Command::Insertion => "insertion",
            Command::Pathgeom => "pathgeom",
            Command::Selftest => "selftest",
        }
    }

    pub fn parse(s: &str) -> Result<Command> {
        COMMANDS.iter().copied().find(|c| c.name() == s).ok_or_else(|| BggError::Parse(format!("unknown command {s:?}")))
    }

    /// (algebra, p and q, weight)
    fn needs(&self) -> (Need, Need, Need) {
        use Need::*;
        match self {
            Command::Rootsys => (Required, No, No),
            Command::Hasse => (Required, Required, Optional),
            Command::Orbit => (Required, No, Required),
            Command::Insertion => (Required, Required, Optional),
            Command::Pathgeom | Command::Selftest => (No, No, No),
            _ => (Required, Required, Required),
        }
    }

    fn options(&self) -> &'static [&'static str] {
        match self {
            Command::Orbit => &["word"],
            Command::KostantCheck => &["scale"],
            Command::Splitting | Command::Qop => &["degree", "seed"],
            Command::Compressed => &["degree", "seed", "sequence"],
            Command::Insertion => &["degree", "inner", "e", "f"],
            Command::Pathgeom => &["w", "k", "l", "validate"],
            Command::Selftest => &["mutate", "criteria"],
            _ => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub rank: Option<usize>,
    /// Crossed nodes of `p`; empty when omitted.
    pub crossed_p: Option<NodeSet>,
    pub crossed_q: Option<NodeSet>,
    pub hw: Option<Weight>,
    pub options: BTreeMap<String, String>,
    pub output: Option<String>,
}

fn render_weight(w: &Weight) -> String {
    w.0.iter().map(display_q).collect::<Vec<_>>().join(",")
}

fn normalize_option(key: &str, value: &str) -> Result<String> {
    let bad = || BggError::Parse(format!("invalid value {value:?} for {key}"));
    Ok(match key {
        "degree" | "seed" | "k" | "l" => value.parse::<u64>().map_err(|_| bad())?.to_string(),
        "w" => display_q(&parse_q(value)?),
        "validate" => value.parse::<bool>().map_err(|_| bad())?.to_string(),
        "inner" => NodeSet::parse(value)?.render(),
        "word" | "criteria" => {
            if value.is_empty() {
                String::new()
            } else {
                let parts: Vec<u64> = value.split(',').map(|p| p.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<_>>()?;
                parts.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            }
        }
        "scale" => match value {
            "trace" | "killing" => value.to_string(),
            _ => return Err(bad()),
        },
        "sequence" => match value {
            "model" | "conjugated" | "independent" => value.to_string(),
            _ => return Err(bad()),
        },
        "mutate" => match value {
            "none" | "flip-action-sign" | "killing-scale" => value.to_string(),
            _ => return Err(bad()),
        },
        "e" | "f" => bgg_core::bgg::InsertionPreset::parse(value)?.name().to_string(),
        _ => return Err(BggError::Parse(format!("unknown option {key:?}"))),
    })
}

impl JobSpec {
    pub fn new(command: Command) -> JobSpec {
        JobSpec { command, rank: None, crossed_p: None, crossed_q: None, hw: None, options: BTreeMap::new(), output: None }
    }

    /// Sets an option after normalising its value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !self.command.options().contains(&key) {
            return Err(BggError::Parse(format!("{} does not take {key:?}", self.command.name())));
        }
        let v = normalize_option(key, value)?;
        if self.options.insert(key.to_string(), v).is_some() {
            return Err(BggError::Parse(format!("repeated option {key:?}")));
        }
        Ok(())
    }

    pub fn option(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(String::as_str)
    }

    /// Checks presence of the fields the command needs and their shapes.
    pub fn validate(&self) -> Result<()> {
        let (alg, pq, hw) = self.command.needs();
        let name = self.command.name();
        let check = |need: Need, present: bool, what: &str| -> Result<()> {
            match (need, present) {
                (Need::Required, false) => Err(BggError::Parse(format!("{name} needs {what}"))),
                (Need::No, true) => Err(BggError::Parse(format!("{name} does not take {what}"))),
                _ => Ok(()),
            }
        };
        check(alg, self.rank.is_some(), "an algebra")?;
        check(pq, self.crossed_q.is_some(), "q")?;
        if pq == Need::No && self.crossed_p.is_some() {
            return Err(BggError::Parse(format!("{name} does not take p")));
        }
        check(hw, self.hw.is_some(), "a weight")?;
        if let Some(r) = self.rank {
            for s in [&self.crossed_p, &self.crossed_q].into_iter().flatten() {
                s.validate(r)?;
            }
            if let Some(w) = &self.hw {
                if w.rank() != r {
                    return Err(BggError::Shape(format!("weight {w} has {} coordinates, A{r} needs {r}", w.rank())));
                }
            }
        }
        Ok(())
    }

    pub fn parse(s: &str) -> Result<JobSpec> {
        let mut toks = s.split_whitespace();
        let head = toks.next().ok_or_else(|| BggError::Parse("empty job".into()))?;
        let mut job = JobSpec::new(Command::parse(head)?);
        let mut seen = Vec::new();
        for t in toks {
            let (k, v) = t.split_once('=').ok_or_else(|| BggError::Parse(format!("expected key=value, got {t:?}")))?;
            if seen.contains(&k) {
                return Err(BggError::Parse(format!("repeated key {k:?}")));
            }
            seen.push(k);
            match k {
                "algebra" => job.rank = Some(parse_algebra(v)?),
                "p" => job.crossed_p = Some(NodeSet::parse(v)?),
                "q" => job.crossed_q = Some(NodeSet::parse(v)?),
                "hw" => job.hw = Some(Weight::parse_list(v)?),
                "out" => {
                    if v.is_empty() {
                        return Err(BggError::Parse("empty output path".into()));
                    }
                    job.output = Some(v.to_string());
                }
                _ => job.set(k, v)?,
            }
        }
        job.validate()?;
        Ok(job)
    }

    pub fn pair_spec(&self) -> Option<PairSpec> {
        Some(PairSpec {
            rank: self.rank?,
            crossed_p: self.crossed_p.clone().unwrap_or_else(NodeSet::empty),
            crossed_q: self.crossed_q.clone()?,
        })
    }
}

impl fmt::Display for JobSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.command.name())?;
        if let Some(r) = self.rank {
            write!(f, " algebra=A{r}")?;
        }
        if self.crossed_q.is_some() {
            let p = self.crossed_p.clone().unwrap_or_else(NodeSet::empty);
            write!(f, " p={}", p.render())?;
        }
        if let Some(q) = &self.crossed_q {
            write!(f, " q={}", q.render())?;
        }
        if let Some(w) = &self.hw {
            write!(f, " hw={}", render_weight(w))?;
        }
        for (k, v) in &self.options {
            write!(f, " {k}={v}")?;
        }
        if let Some(o) = &self.output {
            write!(f, " out={o}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_normalises() {
        let j = JobSpec::parse("splitting  q={2,1} algebra=A3 hw=0,2/4,0 seed=07 p=1 degree=0").unwrap();
        let s = j.to_string();
        assert_eq!(s, "splitting algebra=A3 p=1 q=1,2 hw=0,1/2,0 degree=0 seed=7");
        assert_eq!(JobSpec::parse(&s).unwrap(), j);
    }

    #[test]
    fn p_defaults_to_empty() {
        let j = JobSpec::parse("homology algebra=A2 q=1 hw=1,0").unwrap();
        assert_eq!(j.to_string(), "homology algebra=A2 p=- q=1 hw=1,0");
    }

    #[test]
    fn rejects_bad_jobs() {
        for s in [
            "",
            "frobnicate",
            "homology algebra=A3 q=1",
            "homology algebra=A3 q=1 hw=0,0",
            "pathgeom algebra=A3",
            "splitting algebra=A2 q=1 hw=0,0 degree=-1",
            "homology algebra=A2 q=1 q=2 hw=0,0",
            "homology algebra=A2 q=5 hw=0,0",
            "rootsys algebra=A2 q=1",
            "selftest mutate=maybe",
        ] {
            assert!(JobSpec::parse(s).is_err(), "{s:?}");
        }
    }
}
