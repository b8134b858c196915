//! Replayable duplication paths from a root to a target string.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::beta::Beta;
use crate::codec::{ball_unrank, slice};
use crate::error::{Error, Result};
use crate::word::{DupStep, QString};

/// One step of a certificate. `j` is absent for an exact copy; when present
/// the copy is the `j`-th word of the radius-`⌊β·ℓ⌋` ball around the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CertStep {
    pub p: usize,
    pub l: usize,
    pub t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u128>,
}

impl CertStep {
    pub fn exact(step: DupStep) -> Self {
        CertStep { p: step.p, l: step.l, t: step.t, j: None }
    }

    pub fn dup(&self) -> DupStep {
        DupStep::new(self.p, self.l, self.t)
    }
}

/// A root plus the duplications that rebuild `target` from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCertificate {
    pub q: usize,
    pub root: QString,
    pub target: QString,
    pub beta: Beta,
    pub steps: Vec<CertStep>,
}

/// Why a certificate was rejected. `step` is `None` for failures that are
/// not tied to a particular step (bad root, wrong final string).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

impl PathCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn apply_step(&self, current: &QString, step: &CertStep) -> Result<QString> {
        let dup = step.dup();
        dup.check(current.len())?;
        match step.j {
            None => current.duplicate(dup),
            Some(j) => {
                let block = slice(current, dup.p, dup.l);
                let copy = ball_unrank(&block, self.beta.radius(dup.l), j)
                    .map_err(|e| Error::Bounds(format!("copy index: {e}")))?;
                Ok(current.duplicate_with(dup, copy.symbols()))
            }
        }
    }

    /// Replays every step from the root and returns the final string.
    pub fn replay(&self) -> Result<QString> {
        let mut current = self.root.clone();
        for step in &self.steps {
            current = self.apply_step(&current, step)?;
        }
        Ok(current)
    }

    /// Full check: root validity, step bounds, copy budgets, strictly
    /// increasing lengths and the final string.
    pub fn verify(&self) -> std::result::Result<(), VerifyFailure> {
        let fail = |step, reason: String| Err(VerifyFailure { step, reason });
        if self.root.q() != self.q || self.target.q() != self.q {
            return fail(None, format!("alphabet mismatch: certificate q={}", self.q));
        }
        if self.root.is_empty() || !self.root.is_root() {
            return fail(None, format!("{} is not a root", self.root));
        }
        let mut current = self.root.clone();
        for (i, step) in self.steps.iter().enumerate() {
            match self.apply_step(&current, step) {
                Ok(next) => {
                    if next.len() <= current.len() {
                        return fail(Some(i), "length did not increase".into());
                    }
                    current = next;
                }
                Err(e) => return fail(Some(i), e.to_string()),
            }
        }
        if current != self.target {
            return fail(None, format!("replay gives {current}, target is {}", self.target));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CertificateJson::from(self)).expect("certificate serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&CertificateJson::from(self)).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CertificateJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate JSON: {e}")))?;
        raw.try_into()
    }
}

/// Wire format: `{"q", "root", "target", "beta": "num/den", "steps": [{p, l, t, j?}]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub q: usize,
    pub root: String,
    pub target: String,
    pub beta: Beta,
    pub steps: Vec<CertStep>,
}

impl From<&PathCertificate> for CertificateJson {
    fn from(c: &PathCertificate) -> Self {
        CertificateJson {
            q: c.q,
            root: c.root.to_string(),
            target: c.target.to_string(),
            beta: c.beta,
            steps: c.steps.clone(),
        }
    }
}

impl TryFrom<CertificateJson> for PathCertificate {
    type Error = Error;

    fn try_from(raw: CertificateJson) -> Result<Self> {
        Ok(PathCertificate {
            q: raw.q,
            root: QString::parse(&raw.root, raw.q)?,
            target: QString::parse(&raw.target, raw.q)?,
            beta: raw.beta,
            steps: raw.steps,
        })
    }
}

pub fn verify_certificate(cert: &PathCertificate) -> bool {
    cert.verify().is_ok()
}
