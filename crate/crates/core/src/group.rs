//! Groups `G = ℝ^d × T^ℓ × ⊕ Z_{n_i}`, their duals and characters.
//!
//! Coordinates: reals are plain `f64`, torus coordinates live in `[0, 1)`
//! and are reduced after every operation, residues live in `0..n_i`.
//! Haar measure on `G` is Lebesgue × probability on `T^ℓ` × counting on
//! `D`, so the reference lattice `Z^d × {e} × D` has a fundamental domain
//! of measure one.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::window::HalfOpenBox;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub d: usize,
    #[serde(default)]
    pub torus: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

impl GroupSpec {
    pub fn new(d: usize, torus: usize, torsion: Vec<u64>) -> Result<Self> {
        let spec = Self { d, torus, torsion };
        spec.validate()?;
        Ok(spec)
    }

    pub fn real(d: usize) -> Self {
        Self { d, torus: 0, torsion: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&n) = self.torsion.iter().find(|&&n| n < 2) {
            return Err(Error::Precondition(format!("cyclic factor order {n} < 2")));
        }
        if self.d + self.torus + self.torsion.len() == 0 {
            return Err(Error::Precondition("trivial group".into()));
        }
        Ok(())
    }

    /// `|D|`.
    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            real: vec![0.0; self.d],
            torus: vec![0.0; self.torus],
            disc: vec![0; self.torsion.len()],
        }
    }

    pub fn dual(&self) -> DualSpec {
        dual_spec(self)
    }

    /// All residue vectors of `D` in lexicographic order.
    pub fn residues(&self) -> Vec<Vec<u64>> {
        residues_of(&self.torsion)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        check_dim("real part", self.d, g.real.len())?;
        check_dim("torus part", self.torus, g.torus.len())?;
        check_dim("torsion part", self.torsion.len(), g.disc.len())
    }
}

pub(crate) fn residues_of(torsion: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &n in torsion {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |r| {
                    let mut v = prefix.clone();
                    v.push(r);
                    v
                })
            })
            .collect();
    }
    out
}

/// `Ĝ = ℝ^d × Z^ℓ × ⊕ Z_{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualSpec {
    pub d: usize,
    pub zrank: usize,
    pub torsion: Vec<u64>,
}

pub fn dual_spec(spec: &GroupSpec) -> DualSpec {
    DualSpec { d: spec.d, zrank: spec.torus, torsion: spec.torsion.clone() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub real: Vec<f64>,
    pub torus: Vec<f64>,
    pub disc: Vec<u64>,
}

impl GroupElement {
    /// Builds an element, reducing torus coordinates mod 1 and residues
    /// mod `n_i`.
    pub fn new(real: Vec<f64>, torus: Vec<f64>, disc: Vec<i64>, spec: &GroupSpec) -> Result<Self> {
        let g = Self {
            real,
            torus: torus.into_iter().map(reduce_unit).collect(),
            disc: disc.iter().zip(&spec.torsion).map(|(&r, &n)| r.rem_euclid(n as i64) as u64).collect(),
        };
        spec.check(&g)?;
        if g.disc.len() != disc.len() {
            return Err(Error::DimensionMismatch { what: "torsion part", expected: spec.torsion.len(), got: disc.len() });
        }
        Ok(g)
    }

    pub fn neg(&self, spec: &GroupSpec) -> Self {
        Self {
            real: self.real.iter().map(|x| -x).collect(),
            torus: self.torus.iter().map(|t| reduce_unit(-t)).collect(),
            disc: self.disc.iter().zip(&spec.torsion).map(|(&r, &n)| (n - r) % n).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualElement {
    pub real: Vec<f64>,
    pub zfreq: Vec<i64>,
    pub disc: Vec<u64>,
}

impl DualElement {
    pub fn zero(spec: &GroupSpec) -> Self {
        Self { real: vec![0.0; spec.d], zfreq: vec![0; spec.torus], disc: vec![0; spec.torsion.len()] }
    }

    pub fn add(&self, other: &Self, spec: &GroupSpec) -> Result<Self> {
        self.check(spec)?;
        other.check(spec)?;
        Ok(Self {
            real: self.real.iter().zip(&other.real).map(|(a, b)| a + b).collect(),
            zfreq: self.zfreq.iter().zip(&other.zfreq).map(|(a, b)| a + b).collect(),
            disc: self.disc.iter().zip(&other.disc).zip(&spec.torsion).map(|((a, b), n)| (a + b) % n).collect(),
        })
    }

    fn check(&self, spec: &GroupSpec) -> Result<()> {
        check_dim("dual real part", spec.d, self.real.len())?;
        check_dim("dual integer part", spec.torus, self.zfreq.len())?;
        check_dim("dual torsion part", spec.torsion.len(), self.disc.len())
    }
}

/// Reduce to `[0, 1)`; guards against `x - floor(x) == 1.0` from rounding.
pub(crate) fn reduce_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

pub fn add(a: &GroupElement, b: &GroupElement, spec: &GroupSpec) -> Result<GroupElement> {
    spec.check(a)?;
    spec.check(b)?;
    Ok(GroupElement {
        real: a.real.iter().zip(&b.real).map(|(x, y)| x + y).collect(),
        torus: a.torus.iter().zip(&b.torus).map(|(x, y)| reduce_unit(x + y)).collect(),
        disc: a.disc.iter().zip(&b.disc).zip(&spec.torsion).map(|((x, y), n)| (x + y) % n).collect(),
    })
}

/// Phase of `(ξ, g)` in turns, reduced to `[0, 1)`.
pub fn character_phase(xi: &DualElement, g: &GroupElement, spec: &GroupSpec) -> Result<f64> {
    spec.check(g)?;
    xi.check(spec)?;
    let mut phase = 0.0;
    for (a, b) in xi.real.iter().zip(&g.real) {
        phase += reduce_unit(a * b);
    }
    for (k, t) in xi.zfreq.iter().zip(&g.torus) {
        phase += reduce_unit(*k as f64 * t);
    }
    for ((a, b), n) in xi.disc.iter().zip(&g.disc).zip(&spec.torsion) {
        phase += ((a % n) * (b % n) % n) as f64 / *n as f64;
    }
    Ok(reduce_unit(phase))
}

/// `exp(2πi (ξ·x + k·t + Σ a_i b_i / n_i))`.
pub fn character_eval(xi: &DualElement, g: &GroupElement, spec: &GroupSpec) -> Result<Complex64> {
    Ok(Complex64::from_polar(1.0, TAU * character_phase(xi, g, spec)?))
}

/// Residues counted by [`haar_measure`].
#[derive(Clone, Debug, PartialEq)]
pub enum Residues {
    All,
    Identity,
    Subset(Vec<Vec<u64>>),
}

/// Haar measure of `box × T^ℓ × R` with `R ⊂ D` given by `residues`.
pub fn haar_measure(real_box: &HalfOpenBox, residues: &Residues, spec: &GroupSpec) -> Result<f64> {
    check_dim("real box", spec.d, real_box.dim())?;
    if !real_box.is_bounded() {
        return Err(Error::Precondition("unbounded real box".into()));
    }
    let count = match residues {
        Residues::All => spec.torsion_order() as f64,
        Residues::Identity => 1.0,
        Residues::Subset(rs) => {
            let mut rs: Vec<_> = rs.clone();
            rs.sort();
            rs.dedup();
            for r in &rs {
                check_dim("residue", spec.torsion.len(), r.len())?;
                if r.iter().zip(&spec.torsion).any(|(a, n)| a >= n) {
                    return Err(Error::Precondition("residue out of range".into()));
                }
            }
            rs.len() as f64
        }
    };
    Ok(real_box.volume() * count)
}
