//! The job document: one schema shared by flags, job files and reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use bcinv::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Compute,
    Verify,
    Lab,
    Banach,
    Rol,
    Continuity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Compute => "compute",
            Command::Verify => "verify",
            Command::Lab => "lab",
            Command::Banach => "banach",
            Command::Rol => "rol",
            Command::Continuity => "continuity",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Element names playing the roles of `b`, `c` and the optional inner
/// inverses `g`, `h` of a frame. Missing `g`/`h` means canonical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameNames {
    pub b: String,
    pub c: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
}

impl FrameNames {
    /// The frame named by `b{suffix}`, `c{suffix}`, ... when those elements exist.
    pub fn conventional(elements: &BTreeMap<String, String>, suffix: &str) -> Option<FrameNames> {
        let name = |r: &str| format!("{r}{suffix}");
        let present = |r: &str| elements.contains_key(&name(r)).then(|| name(r));
        Some(FrameNames { b: present("b")?, c: present("c")?, g: present("g"), h: present("h") })
    }
}

/// Which algorithm computes the inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Corner,
    Factor,
    Group,
    Exhaustive,
    Series,
    Integral,
    Limit,
}

impl MethodChoice {
    pub fn name(self) -> &'static str {
        match self {
            MethodChoice::Corner => "corner",
            MethodChoice::Factor => "factor",
            MethodChoice::Group => "group",
            MethodChoice::Exhaustive => "exhaustive",
            MethodChoice::Series => "series",
            MethodChoice::Integral => "integral",
            MethodChoice::Limit => "limit",
        }
    }

    pub fn is_representation(self) -> bool {
        matches!(self, MethodChoice::Series | MethodChoice::Integral | MethodChoice::Limit)
    }

    pub fn algebraic(self) -> Option<bcinv::inverse::Method> {
        use bcinv::inverse::Method;
        match self {
            MethodChoice::Corner => Some(Method::CornerSolve),
            MethodChoice::Factor => Some(Method::Factor),
            MethodChoice::Group => Some(Method::Group),
            MethodChoice::Exhaustive => Some(Method::Exhaustive),
            _ => None,
        }
    }
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        use MethodChoice::*;
        [Corner, Factor, Group, Exhaustive, Series, Integral, Limit]
            .into_iter()
            .find(|m| m.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown method `{s}`")))
    }
}

/// A complete description of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    pub ring: String,
    /// Named element literals: residues (`5`), matrices (`[[1,0],[0,1]]`),
    /// or shorthands such as `E11`, `I`, `0`, `diag(2,3)`.
    #[serde(default)]
    pub elements: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameNames>,
    /// Second frame, for `rol` and the two-point identity in `banach`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame2: Option<FrameNames>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_im: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<bcinv::banach::BoundSide>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<bcinv::lab::Suite>,
    /// Last index of a continuity run (`1..=last`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last: Option<u64>,
    #[serde(default)]
    pub sequential: bool,
}

impl JobSpec {
    pub fn new(command: Command, ring: impl Into<String>) -> Self {
        JobSpec {
            command,
            ring: ring.into(),
            elements: BTreeMap::new(),
            frame: None,
            frame2: None,
            method: None,
            tol: None,
            beta: None,
            lambda0: None,
            lambda: None,
            lambda_im: None,
            side: None,
            suite: None,
            last: None,
            sequential: false,
        }
    }

    pub fn element(&self, name: &str) -> Result<&str, Error> {
        self.elements
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| Error::Parse(format!("element `{name}` is required by `{}`", self.command)))
    }

    pub fn primary_frame(&self) -> Result<FrameNames, Error> {
        self.frame
            .clone()
            .or_else(|| FrameNames::conventional(&self.elements, ""))
            .ok_or_else(|| Error::Parse("a frame needs elements `b` and `c`".into()))
    }

    /// The second frame; `b2`/`c2` fall back to `b`/`c`.
    pub fn secondary_frame(&self) -> Result<FrameNames, Error> {
        if let Some(f) = &self.frame2 {
            return Ok(f.clone());
        }
        if let Some(f) = FrameNames::conventional(&self.elements, "2") {
            return Ok(f);
        }
        let first = self.primary_frame()?;
        let pick = |r: &str, fallback: String| {
            let n = format!("{r}2");
            if self.elements.contains_key(&n) {
                n
            } else {
                fallback
            }
        };
        Ok(FrameNames {
            b: pick("b", first.b.clone()),
            c: pick("c", first.c.clone()),
            g: self.elements.contains_key("g2").then(|| "g2".into()).or(first.g.clone()),
            h: self.elements.contains_key("h2").then(|| "h2".into()).or(first.h.clone()),
        })
    }

    /// Checks what can be checked without building the ring.
    pub fn validate(&self) -> Result<(), Error> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => {
                Err(Error::Parse(format!("{name} must be positive and finite, got {x}")))
            }
            _ => Ok(()),
        };
        positive("tol", self.tol)?;
        positive("lambda0", self.lambda0)?;
        if let Some(b) = self.beta {
            if !b.is_finite() || b == 0.0 {
                return Err(Error::Parse(format!("beta must be finite and nonzero, got {b}")));
            }
        }
        for (name, v) in [("lambda", self.lambda), ("lambda_im", self.lambda_im)] {
            if v.is_some_and(|x| !x.is_finite()) {
                return Err(Error::Parse(format!("{name} must be finite")));
            }
        }
        if self.last == Some(0) {
            return Err(Error::Parse("last must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventional_frames() {
        let mut job = JobSpec::new(Command::Rol, "Z6");
        for (k, v) in [("a", "5"), ("b", "4"), ("c", "4"), ("b2", "2")] {
            job.elements.insert(k.into(), v.into());
        }
        let f = job.primary_frame().unwrap();
        assert_eq!((f.b.as_str(), f.c.as_str(), f.g.as_deref()), ("b", "c", None));
        let f2 = job.secondary_frame().unwrap();
        assert_eq!((f2.b.as_str(), f2.c.as_str()), ("b2", "c"));
    }

    #[test]
    fn method_names_round_trip() {
        for m in ["corner", "factor", "group", "exhaustive", "series", "integral", "limit"] {
            assert_eq!(m.parse::<MethodChoice>().unwrap().name(), m);
        }
        assert!("nope".parse::<MethodChoice>().is_err());
    }

    #[test]
    fn json_omits_unset_fields() {
        let job = JobSpec::new(Command::Lab, "M2F2");
        let text = serde_json::to_string(&job).unwrap();
        assert_eq!(text, r#"{"command":"lab","ring":"M2F2","elements":{},"sequential":false}"#);
        assert_eq!(serde_json::from_str::<JobSpec>(&text).unwrap(), job);
    }

    #[test]
    fn tolerances_must_be_positive() {
        let mut job = JobSpec::new(Command::Compute, "R:2");
        job.tol = Some(0.0);
        assert!(job.validate().is_err());
        job.tol = Some(1e-9);
        assert!(job.validate().is_ok());
    }
}
