//! Stampfli completion `(x, y, z)^` of three increasing weights.
//!
//! For `0 < x < y < z` the completed weight sequence is the weight sequence of
//! a subnormal unilateral shift whose Berger measure `xi` is 2-atomic. This
//! module builds `xi`, its first two negative moments, and the bijection
//! between increasing triples and rate pairs
//! `(r, theta) = (x^2 int s^-1 dxi, x^4 int s^-2 dxi / r^2)` in `(1, inf)^2`.
//!
//! Every closed form is evaluated in the gap variables `du = u - 1` and
//! `dv = v - u`, where `u = y^2/x^2` and `v = z^2/x^2`. In these variables the
//! numerators of the negative-moment formulas are sums of positive terms, so
//! nearly degenerate triples keep full relative precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::tol;

/// Three weights `0 < x <= y <= z`, stored as `x` plus the squared gaps
/// `du = (y^2 - x^2)/x^2`, `dv = (z^2 - y^2)/x^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTriple", into = "RawTriple")]
pub struct WeightTriple {
    x: f64,
    du: f64,
    dv: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTriple {
    x: f64,
    y: f64,
    z: f64,
}

impl TryFrom<RawTriple> for WeightTriple {
    type Error = Error;

    fn try_from(raw: RawTriple) -> Result<Self> {
        WeightTriple::new(raw.x, raw.y, raw.z)
    }
}

impl From<WeightTriple> for RawTriple {
    fn from(t: WeightTriple) -> Self {
        RawTriple {
            x: t.x(),
            y: t.y(),
            z: t.z(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleKind {
    /// `x < y < z`: 2-atomic Berger measure off zero.
    Generic,
    /// `x = y = z`: the flat shift, Berger measure `delta(x^2)`.
    Flat,
    /// `x < y = z`: 2-atomic Berger measure with an atom at zero.
    ZeroAtom,
}

impl WeightTriple {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let bad = |reason| Error::InvalidTriple { x, y, z, reason };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(bad("weights must be finite"));
        }
        if x <= 0.0 {
            return Err(bad("weights must be positive"));
        }
        if !(x <= y && y <= z) {
            return Err(bad("weights must be nondecreasing"));
        }
        if x == y && y < z {
            return Err(bad(
                "x = y < z is not the start of a subnormal weight sequence",
            ));
        }
        let x2 = x * x;
        Ok(Self {
            x,
            du: (y - x) * (y + x) / x2,
            dv: (z - y) * (z + y) / x2,
        })
    }

    /// Builds the triple `(x, x sqrt(1 + du), x sqrt(1 + du + dv))` without
    /// rounding the gaps through the weights.
    pub fn from_gaps(x: f64, du: f64, dv: f64) -> Result<Self> {
        let y = x * (1.0 + du).sqrt();
        let z = x * (1.0 + du + dv).sqrt();
        let bad = |reason| Error::InvalidTriple { x, y, z, reason };
        if !(x.is_finite() && du.is_finite() && dv.is_finite()) || x <= 0.0 {
            return Err(bad("weights must be finite and positive"));
        }
        if du < 0.0 || dv < 0.0 {
            return Err(bad("weights must be nondecreasing"));
        }
        if du == 0.0 && dv > 0.0 {
            return Err(bad(
                "x = y < z is not the start of a subnormal weight sequence",
            ));
        }
        Ok(Self { x, du, dv })
    }

    /// The flat triple `(x, x, x)`.
    pub fn flat(x: f64) -> Result<Self> {
        Self::new(x, x, x)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.x * (1.0 + self.du).sqrt()
    }

    pub fn z(&self) -> f64 {
        self.x * (1.0 + self.du + self.dv).sqrt()
    }

    pub fn weights(&self) -> [f64; 3] {
        [self.x(), self.y(), self.z()]
    }

    /// `(y^2 - x^2) / x^2`.
    pub fn du(&self) -> f64 {
        self.du
    }

    /// `(z^2 - y^2) / x^2`.
    pub fn dv(&self) -> f64 {
        self.dv
    }

    pub fn normalized(&self) -> Option<NormalizedPair> {
        NormalizedPair::new(1.0 + self.du, 1.0 + self.du + self.dv).ok()
    }

    pub fn kind(&self) -> TripleKind {
        match (self.du > 0.0, self.dv > 0.0) {
            (true, true) => TripleKind::Generic,
            (true, false) => TripleKind::ZeroAtom,
            _ => TripleKind::Flat,
        }
    }

    fn require_generic(&self) -> Result<()> {
        if self.kind() == TripleKind::Generic {
            Ok(())
        } else {
            Err(Error::InvalidTriple {
                x: self.x(),
                y: self.y(),
                z: self.z(),
                reason: "operation needs a strictly increasing triple",
            })
        }
    }
}

/// Data of the 2-atomic Berger measure `rho delta(s0) + (1 - rho) delta(s1)`.
///
/// The atoms are the roots of `s^2 = psi1 s + psi0`, the characteristic
/// equation of the two-term recursion `gamma_{n+2} = psi1 gamma_{n+1} +
/// psi0 gamma_n` satisfied by the moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StampfliParams {
    pub psi0: f64,
    pub psi1: f64,
    pub s0: f64,
    pub s1: f64,
    pub rho: f64,
}

/// A point of `{(u, v) : v > u > 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedPair {
    u: f64,
    v: f64,
}

impl NormalizedPair {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(u.is_finite() && u > 1.0) {
            return Err(Error::OutOfDomain {
                what: "u",
                value: u,
                domain: "(1, inf)",
            });
        }
        if !(v.is_finite() && v > u) {
            return Err(Error::OutOfDomain {
                what: "v",
                value: v,
                domain: "(u, inf)",
            });
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

/// Normalised first and second negative moments, both in `(1, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateTheta {
    r: f64,
    theta: f64,
}

impl RateTheta {
    /// Rejects `r` or `theta` within [`tol::POLE`] of 1, where the inverse
    /// formulas have poles.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        check_above_one("r", r)?;
        check_above_one("theta", theta)?;
        Ok(Self { r, theta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

fn check_above_one(what: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value - 1.0 > tol::POLE {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what,
            value,
            domain: "(1, inf)",
        })
    }
}

/// `psi0, psi1`, atoms and mass of the Berger measure of a strictly
/// increasing triple.
pub fn stampfli_params(t: &WeightTriple) -> Result<StampfliParams> {
    t.require_generic()?;
    let x2 = t.x * t.x;
    let (du, dv) = (t.du, t.dv);
    let u = 1.0 + du;

    let psi1 = x2 * u * (du + dv) / du;
    let psi0 = -x2 * x2 * u * dv / du;
    // psi1^2 + 4 psi0 = (x^2 u / du)^2 ((du - dv)^2 + 4 du^2 dv / u)
    let root = x2 * u / du * ((du - dv).powi(2) + 4.0 * du * du * dv / u).sqrt();
    let s1 = 0.5 * (psi1 + root);
    let s0 = -psi0 / s1;

    let upper = s1 - x2;
    let lower = x2 - s0;
    let rho = upper / (upper + lower);
    Ok(StampfliParams {
        psi0,
        psi1,
        s0,
        s1,
        rho,
    })
}

/// Berger measure `xi_{x,y,z}` of the Stampfli completion.
///
/// Generic triples give `rho delta(s0) + (1 - rho) delta(s1)`. `x = y = z`
/// gives `delta(x^2)`. `x < y = z` gives mass `1 - x^2/y^2` at zero and
/// `x^2/y^2` at `y^2`, fixed by the first moment `x^2`.
pub fn stampfli_measure(t: &WeightTriple) -> Result<AtomicMeasure> {
    match t.kind() {
        TripleKind::Generic => {
            let p = stampfli_params(t)?;
            AtomicMeasure::two_point(p.s0, p.s1, p.rho)
        }
        TripleKind::Flat => AtomicMeasure::dirac(t.x * t.x),
        TripleKind::ZeroAtom => {
            let y2 = t.x * t.x * (1.0 + t.du);
            let at_top = 1.0 / (1.0 + t.du);
            AtomicMeasure::new(vec![0.0, y2], vec![1.0 - at_top, at_top])
        }
    }
}

/// `int s^-1 dxi_{x,y,z}` for a strictly increasing triple.
pub fn neg_moment1(t: &WeightTriple) -> Result<f64> {
    t.require_generic()?;
    Ok(f_gaps(t.du, t.dv) / (t.x * t.x))
}

/// `int s^-2 dxi_{x,y,z}` for a strictly increasing triple.
pub fn neg_moment2(t: &WeightTriple) -> Result<f64> {
    t.require_generic()?;
    Ok(g_gaps(t.du, t.dv) / (t.x * t.x).powi(2))
}

// f(u, v) = (1 - 2u + uv) / (u (v - u)) = (du^2 + u dv) / (u dv)
fn f_gaps(du: f64, dv: f64) -> f64 {
    let u = 1.0 + du;
    (du * du + u * dv) / (u * dv)
}

// g(u, v) = (-1 + u v^2 + u + 2v + u^2 - 4uv) / (u (v - u)^2)
//         = (du^3 + 2 du^2 dv + u dv^2) / (u dv^2)
fn g_gaps(du: f64, dv: f64) -> f64 {
    let u = 1.0 + du;
    (du * du * (du + 2.0 * dv) + u * dv * dv) / (u * dv * dv)
}

/// `f(u, v) = (1 - 2u + uv) / (u (v - u))`; maps `{v > u > 1}` onto `(1, inf)`.
pub fn f_map(p: &NormalizedPair) -> f64 {
    f_gaps(p.u - 1.0, p.v - p.u)
}

/// `phi_u(r) = (1 - 2u + r u^2) / ((r - 1) u)`, the unique `v` with
/// `f(u, v) = r`.
pub fn phi_u(u: f64, r: f64) -> Result<f64> {
    let du = gap_above_one("u", u)?;
    check_above_one("r", r)?;
    // phi_u(r) - u = (u - 1)^2 / ((r - 1) u)
    Ok(u + du * du / ((r - 1.0) * u))
}

/// `h_r(u) = (1 - 2r + r^2 u) / (u - 1) = r^2 + (r - 1)^2 / (u - 1)`.
pub fn h_r(r: f64, u: f64) -> Result<f64> {
    check_above_one("r", r)?;
    let du = gap_above_one("u", u)?;
    Ok(r * r + (r - 1.0).powi(2) / du)
}

fn gap_above_one(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 1.0 {
        Ok(value - 1.0)
    } else {
        Err(Error::OutOfDomain {
            what,
            value,
            domain: "(1, inf)",
        })
    }
}

/// `(r, theta)` with `int s^-1 dxi = r / x^2` and
/// `int s^-2 dxi = theta r^2 / x^4`.
pub fn params_from_triple(t: &WeightTriple) -> Result<RateTheta> {
    t.require_generic()?;
    let r = f_gaps(t.du, t.dv);
    let theta = g_gaps(t.du, t.dv) / (r * r);
    Ok(RateTheta { r, theta })
}

/// The unique strictly increasing triple starting at `x` whose Berger measure
/// has normalised negative moments `(r, theta)`.
pub fn triple_from_params(x: f64, rt: RateTheta) -> Result<WeightTriple> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::OutOfDomain {
            what: "x",
            value: x,
            domain: "(0, inf)",
        });
    }
    let (r, theta) = (rt.r, rt.theta);
    // h_r(u) = theta r^2  <=>  u - 1 = (r - 1)^2 / ((theta - 1) r^2)
    let du = (r - 1.0).powi(2) / ((theta - 1.0) * r * r);
    // v = phi_u(r)  <=>  v - u = (u - 1)^2 / ((r - 1) u)
    let dv = du * du / ((r - 1.0) * (1.0 + du));
    WeightTriple::from_gaps(x, du, dv)
}

/// Largest atom of `xi` for the triple generated by [`triple_from_params`],
/// from `psi1 = x^2 (theta r - 1) / ((theta - 1) r)`.
pub fn support_sup_closed(x: f64, rt: RateTheta) -> Result<f64> {
    let t = triple_from_params(x, rt)?;
    let (r, theta) = (rt.r, rt.theta);
    let x2 = x * x;
    let psi1 = x2 * (theta * r - 1.0) / ((theta - 1.0) * r);
    let psi0 = -x2 * x2 * (1.0 + t.du) * t.dv / t.du;
    Ok(0.5 * (psi1 + (psi1 * psi1 + 4.0 * psi0).sqrt()))
}

/// The first `n` weights of `(x, y, z)^`: the data, then
/// `alpha_k = sqrt(gamma_{k+1} / gamma_k)` with `gamma_k = int s^k dxi`.
pub fn weight_sequence(t: &WeightTriple, n: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::OutOfDomain {
            what: "n",
            value: n as f64,
            domain: "[3, inf)",
        });
    }
    let xi = stampfli_measure(t)?;
    let mut out = t.weights().to_vec();
    out.extend((3..n).map(|k| moment_ratio(&xi, k as i32).sqrt()));
    Ok(out)
}

/// `gamma_{k+1} / gamma_k`, evaluated with atoms scaled by the largest one so
/// high orders do not overflow.
fn moment_ratio(mu: &AtomicMeasure, k: i32) -> f64 {
    let top = mu.support_sup();
    let (num, den) = mu
        .atoms()
        .iter()
        .zip(mu.masses())
        .fold((0.0, 0.0), |(num, den), (s, m)| {
            let w = m * (s / top).powi(k);
            (num + w * s, den + w)
        });
    num / den
}
