//! Numerical parameters `(δ, K1, K2, C0, C1)`, acceptability and the
//! admissibility case split.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unchecked parameter tuple, as typed on a command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RawParams {
    pub delta: i64,
    pub k1: i64,
    pub k2: i64,
    pub c0: i64,
    pub c1: i64,
}

impl RawParams {
    pub const fn new(delta: i64, k1: i64, k2: i64, c0: i64, c1: i64) -> Self {
        Self { delta, k1, k2, c0, c1 }
    }
}

impl From<(i64, i64, i64, i64, i64)> for RawParams {
    fn from((delta, k1, k2, c0, c1): (i64, i64, i64, i64, i64)) -> Self {
        Self::new(delta, k1, k2, c0, c1)
    }
}

impl fmt::Display for RawParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.delta, self.k1, self.k2, self.c0, self.c1)
    }
}

/// Outcome of the admissibility test. Case numbering starts at II on purpose:
/// the primitive 3-constrained classes are Cases II and III of Cherlin's
/// catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdmissibilityCase {
    NotAcceptable,
    AcceptableNotAdmissible,
    #[serde(rename = "IIA")]
    CaseIIA,
    #[serde(rename = "IIB")]
    CaseIIB,
    #[serde(rename = "III")]
    CaseIII,
}

impl AdmissibilityCase {
    pub fn is_admissible(self) -> bool {
        matches!(self, Self::CaseIIA | Self::CaseIIB | Self::CaseIII)
    }

    pub fn is_case_ii(self) -> bool {
        matches!(self, Self::CaseIIA | Self::CaseIIB)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::NotAcceptable => "NotAcceptable",
            Self::AcceptableNotAdmissible => "AcceptableNotAdmissible",
            Self::CaseIIA => "IIA",
            Self::CaseIIB => "IIB",
            Self::CaseIII => "III",
        }
    }
}

impl fmt::Display for AdmissibilityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn is_acceptable(raw: RawParams) -> bool {
    let RawParams { delta, k1, k2, c0, c1 } = raw;
    let c_range = 2 * delta + 2..=3 * delta + 2;
    delta >= 3
        && 1 <= k1
        && k1 <= k2
        && k2 <= delta
        && c_range.contains(&c0)
        && c_range.contains(&c1)
        && c0.rem_euclid(2) == 0
        && c1.rem_euclid(2) == 1
}

pub fn classify(raw: RawParams) -> AdmissibilityCase {
    if !is_acceptable(raw) {
        return AdmissibilityCase::NotAcceptable;
    }
    let RawParams { delta, k1, k2, c0, c1 } = raw;
    let c = c0.min(c1);
    let c_prime = c0.max(c1);

    if c <= 2 * delta + k1 {
        let base = c == 2 * k1 + 2 * k2 + 1 && k1 + k2 >= delta && k1 + 2 * k2 < 2 * delta;
        if base && c_prime == c + 1 {
            return AdmissibilityCase::CaseIIA;
        }
        if base && c_prime > c + 1 && k1 == k2 && 3 * k2 == 2 * delta - 1 {
            return AdmissibilityCase::CaseIIB;
        }
    } else {
        let ok = k1 + 2 * k2 >= 2 * delta - 1
            && 3 * k2 >= 2 * delta
            && (k1 + 2 * k2 != 2 * delta - 1 || c >= 2 * delta + k1 + 2)
            && (c_prime <= c + 1 || c >= 2 * delta + k2);
        if ok {
            return AdmissibilityCase::CaseIII;
        }
    }
    AdmissibilityCase::AcceptableNotAdmissible
}

/// An acceptable parameter tuple. Construction rejects anything else, so the
/// range invariants can be relied upon downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ParameterSequence {
    delta: u32,
    k1: u32,
    k2: u32,
    c0: u32,
    c1: u32,
}

impl ParameterSequence {
    /// Builds an acceptable (not necessarily admissible) sequence.
    pub fn new(delta: i64, k1: i64, k2: i64, c0: i64, c1: i64) -> Result<Self> {
        Self::try_from(RawParams::new(delta, k1, k2, c0, c1))
    }

    /// Builds a sequence and additionally requires admissibility.
    pub fn admissible(delta: i64, k1: i64, k2: i64, c0: i64, c1: i64) -> Result<Self> {
        let p = Self::new(delta, k1, k2, c0, c1)?;
        p.require_admissible()?;
        Ok(p)
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.case().is_admissible() {
            Ok(())
        } else {
            Err(Error::NotAdmissible(self.raw()))
        }
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }
    pub fn k1(&self) -> u32 {
        self.k1
    }
    pub fn k2(&self) -> u32 {
        self.k2
    }
    pub fn c0(&self) -> u32 {
        self.c0
    }
    pub fn c1(&self) -> u32 {
        self.c1
    }

    /// `min(C0, C1)`.
    pub fn c(&self) -> u32 {
        self.c0.min(self.c1)
    }

    /// `max(C0, C1)`.
    pub fn c_prime(&self) -> u32 {
        self.c0.max(self.c1)
    }

    pub fn case(&self) -> AdmissibilityCase {
        classify(self.raw())
    }

    pub fn is_admissible(&self) -> bool {
        self.case().is_admissible()
    }

    pub fn raw(&self) -> RawParams {
        RawParams::new(
            self.delta.into(),
            self.k1.into(),
            self.k2.into(),
            self.c0.into(),
            self.c1.into(),
        )
    }
}

impl TryFrom<RawParams> for ParameterSequence {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        if !is_acceptable(raw) {
            return Err(Error::NotAcceptable(raw));
        }
        // Acceptability bounds every field by 3δ+2; δ itself must fit a u32.
        let narrow = |v: i64| u32::try_from(v).map_err(|_| Error::NotAcceptable(raw));
        Ok(Self {
            delta: narrow(raw.delta)?,
            k1: narrow(raw.k1)?,
            k2: narrow(raw.k2)?,
            c0: narrow(raw.c0)?,
            c1: narrow(raw.c1)?,
        })
    }
}

impl From<ParameterSequence> for RawParams {
    fn from(p: ParameterSequence) -> Self {
        p.raw()
    }
}

impl fmt::Display for ParameterSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.raw().fmt(f)
    }
}

/// All admissible tuples of diameter `delta`, in lexicographic order.
pub fn enumerate_admissible(delta: u32) -> Vec<ParameterSequence> {
    let d = i64::from(delta);
    let mut out = Vec::new();
    for k1 in 1..=d {
        for k2 in k1..=d {
            for c0 in (2 * d + 2..=3 * d + 2).filter(|c| c % 2 == 0) {
                for c1 in (2 * d + 2..=3 * d + 2).filter(|c| c % 2 == 1) {
                    let raw = RawParams::new(d, k1, k2, c0, c1);
                    if classify(raw).is_admissible() {
                        out.push(ParameterSequence::try_from(raw).expect("admissible implies acceptable"));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(t: (i64, i64, i64, i64, i64)) -> RawParams {
        t.into()
    }

    #[test]
    fn acceptability_examples() {
        assert!(is_acceptable(raw((5, 3, 3, 16, 13))));
        assert!(!is_acceptable(raw((2, 1, 1, 8, 7))));
        assert!(!is_acceptable(raw((5, 3, 3, 13, 16))));
        assert!(!is_acceptable(raw((5, 4, 3, 16, 13))));
        assert!(!is_acceptable(raw((5, 3, 3, 18, 13))));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(raw((5, 3, 3, 16, 13))), AdmissibilityCase::CaseIIB);
        assert_eq!(classify(raw((4, 1, 3, 14, 11))), AdmissibilityCase::CaseIII);
        assert_eq!(classify(raw((3, 1, 1, 8, 9))), AdmissibilityCase::AcceptableNotAdmissible);
        assert_eq!(classify(raw((2, 1, 1, 8, 7))), AdmissibilityCase::NotAcceptable);
    }

    #[test]
    fn construction_rejects_bad_tuples() {
        assert_eq!(
            ParameterSequence::new(5, 3, 3, 13, 16),
            Err(Error::NotAcceptable(raw((5, 3, 3, 13, 16))))
        );
        assert!(ParameterSequence::new(3, 1, 1, 8, 9).is_ok());
        assert_eq!(
            ParameterSequence::admissible(3, 1, 1, 8, 9),
            Err(Error::NotAdmissible(raw((3, 1, 1, 8, 9))))
        );
        let p = ParameterSequence::admissible(5, 3, 3, 16, 13).unwrap();
        assert_eq!((p.c(), p.c_prime()), (13, 16));
    }

    #[test]
    fn enumerate_contains_known_tuples() {
        let d3 = enumerate_admissible(3);
        assert!(d3.contains(&ParameterSequence::new(3, 1, 3, 10, 9).unwrap()));
        let d5 = enumerate_admissible(5);
        assert!(d5.contains(&ParameterSequence::new(5, 3, 3, 16, 13).unwrap()));
        assert!(d5.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn admissible_tuples_satisfy_their_case_bullets() {
        for delta in 3..=12 {
            for p in enumerate_admissible(delta) {
                let (d, k1, k2, c) = (p.delta(), p.k1(), p.k2(), p.c());
                assert!(is_acceptable(p.raw()));
                match p.case() {
                    AdmissibilityCase::CaseIIA | AdmissibilityCase::CaseIIB => {
                        assert!(c <= 2 * d + k1);
                        assert_eq!(c, 2 * k1 + 2 * k2 + 1);
                    }
                    AdmissibilityCase::CaseIII => {
                        assert!(c > 2 * d + k1);
                        assert!(k1 + 2 * k2 >= 2 * d - 1);
                    }
                    other => panic!("{p} classified as {other}"),
                }
            }
        }
    }

    #[test]
    fn serde_goes_through_validation() {
        let p: ParameterSequence =
            serde_json::from_str(r#"{"delta":5,"k1":3,"k2":3,"c0":16,"c1":13}"#).unwrap();
        assert_eq!(p.raw(), raw((5, 3, 3, 16, 13)));
        assert!(serde_json::from_str::<ParameterSequence>(
            r#"{"delta":5,"k1":3,"k2":3,"c0":13,"c1":16}"#
        )
        .is_err());
    }
}
