//! Serializable forms of library values. Field names are part of the
//! documented JSON schema; change them only together with the README.

use eloop_core::diagnostics::{Counterexample, Law, LawReport};
use eloop_core::{EllipticLoop, LoopPoint, ProjPoint, Ring, RingElem, RingKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A point as its canonical coordinate codes `[X, Y, Z]`.
pub type Point = [u32; 3];

pub fn point(pt: &LoopPoint) -> Point {
    pt.codes()
}

pub fn points(pts: &[LoopPoint]) -> Vec<Point> {
    pts.iter().map(LoopPoint::codes).collect()
}

/// Text form `(X:Y:Z)`.
pub fn show(pt: &Point) -> String {
    format!("({}:{}:{})", pt[0], pt[1], pt[2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// `Z/p^eZ`.
    Integers,
    /// `F_p[t]/(t^e)`.
    Polynomial,
}

impl From<Kind> for RingKind {
    fn from(k: Kind) -> RingKind {
        match k {
            Kind::Integers => RingKind::IntegerQuotient,
            Kind::Polynomial => RingKind::TruncatedPolynomial,
        }
    }
}

impl From<RingKind> for Kind {
    fn from(k: RingKind) -> Kind {
        match k {
            RingKind::IntegerQuotient => Kind::Integers,
            RingKind::TruncatedPolynomial => Kind::Polynomial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub kind: Kind,
    pub p: u32,
    pub e: u32,
}

/// The loop `L_{A,B}(R)`. `A` and `B` are element codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub ring: RingSpec,
    #[serde(rename = "A")]
    pub a: u32,
    #[serde(rename = "B")]
    pub b: u32,
}

impl Instance {
    pub fn of(lp: &EllipticLoop) -> Instance {
        let r = lp.ring();
        Instance {
            ring: RingSpec { kind: r.kind().into(), p: r.prime(), e: r.exponent() },
            a: lp.a().value(),
            b: lp.b().value(),
        }
    }

    pub fn build(&self) -> Result<EllipticLoop, CliError> {
        let r = Ring::new(self.ring.kind.into(), self.ring.p, self.ring.e)?;
        Ok(EllipticLoop::new(r, r.elem(self.a as u64)?, r.elem(self.b as u64)?)?)
    }
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let RingSpec { kind, p, e } = self.ring;
        match kind {
            Kind::Integers => write!(f, "L_{{{},{}}}(Z/{p}^{e})", self.a, self.b),
            Kind::Polynomial => write!(f, "L_{{{},{}}}(F_{p}[t]/t^{e})", self.a, self.b),
        }
    }
}

/// Reads a ring element. Integer rings take any integer and reduce it;
/// polynomial rings take a code in `[0, p^e)`, digit `i` in base `p` being
/// the coefficient of `t^i`.
pub fn elem(ring: &Ring, v: i64) -> Result<RingElem, CliError> {
    match ring.kind() {
        RingKind::IntegerQuotient => Ok(ring.int(v)),
        RingKind::TruncatedPolynomial => {
            let code = u64::try_from(v).map_err(|_| CliError::Usage(format!("negative code {v}")))?;
            Ok(ring.elem(code)?)
        }
    }
}

/// A normalized projective point, not necessarily on the loop.
pub fn proj(ring: &Ring, coords: [i64; 3]) -> Result<ProjPoint, CliError> {
    let [x, y, z] = coords.map(|v| elem(ring, v));
    Ok(ProjPoint::normalize(ring, x?, y?, z?)?)
}

pub fn loop_point(lp: &EllipticLoop, coords: [i64; 3]) -> Result<LoopPoint, CliError> {
    Ok(lp.point(proj(lp.ring(), coords)?)?)
}

fn decode(lp: &EllipticLoop, pt: &Point) -> Result<LoopPoint, CliError> {
    loop_point(lp, pt.map(i64::from))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleDto {
    pub points: Vec<Point>,
    pub scalars: Vec<i64>,
}

/// Outcome of checking one law, self-contained enough to replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReportDto {
    pub instance: Instance,
    pub law: String,
    pub holds: bool,
    pub exhaustive: bool,
    pub checked: u64,
    pub seed: Option<u64>,
    pub counterexample: Option<CounterexampleDto>,
}

impl LawReportDto {
    pub fn new(lp: &EllipticLoop, rep: &LawReport) -> LawReportDto {
        LawReportDto {
            instance: Instance::of(lp),
            law: rep.law.name().to_string(),
            holds: rep.holds,
            exhaustive: rep.exhaustive,
            checked: rep.checked,
            seed: rep.seed,
            counterexample: rep.counterexample.as_ref().map(|cx| CounterexampleDto {
                points: points(&cx.points),
                scalars: cx.scalars.clone(),
            }),
        }
    }

    /// The library report, with every point re-validated against the loop.
    pub fn to_report(&self, lp: &EllipticLoop) -> Result<LawReport, CliError> {
        let law = Law::from_name(&self.law).ok_or_else(|| CliError::Usage(format!("unknown law {}", self.law)))?;
        let counterexample = match &self.counterexample {
            None => None,
            Some(cx) => Some(Counterexample {
                points: cx.points.iter().map(|p| decode(lp, p)).collect::<Result<_, _>>()?,
                scalars: cx.scalars.clone(),
            }),
        };
        Ok(LawReport {
            law,
            holds: self.holds,
            exhaustive: self.exhaustive,
            checked: self.checked,
            seed: self.seed,
            counterexample,
        })
    }

    pub fn text(&self) -> String {
        format!("{}: {}", self.law, self.summary())
    }

    /// Verdict, scope and counterexample, without the law name.
    pub fn summary(&self) -> String {
        let scope = if self.exhaustive {
            format!("{} tuples, exhaustive", self.checked)
        } else {
            match self.seed {
                Some(s) => format!("{} tuples sampled, seed {s}", self.checked),
                None => format!("{} tuples", self.checked),
            }
        };
        let mut out = format!("{} ({scope})", if self.holds { "holds" } else { "fails" });
        if let Some(cx) = &self.counterexample {
            let pts: Vec<String> = cx.points.iter().map(show).collect();
            out.push_str(&format!("\n  counterexample: {}", pts.join(" ")));
            if !cx.scalars.is_empty() {
                out.push_str(&format!(" scalars {:?}", cx.scalars));
            }
        }
        out
    }
}
