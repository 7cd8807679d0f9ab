//! Gaussian × trigonometric polynomial × finite-weight test functions.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// `x ↦ exp(-π |x - center|² / σ²)`, with integral `σ^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub sigma: f64,
    pub center: Vec<f64>,
}

impl Gaussian {
    pub fn centered(dim: usize, sigma: f64) -> Self {
        Self { sigma, center: vec![0.0; dim] }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(&self.center).map(|(a, c)| (a - c).powi(2)).sum();
        (-PI * r2 / (self.sigma * self.sigma)).exp()
    }

    pub fn integral(&self) -> f64 {
        self.sigma.powi(self.center.len() as i32)
    }
}

/// One term `coeff · e^{2πi k·t}` of a trigonometric polynomial on `T^ℓ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub freq: Vec<i64>,
    pub coeff: Complex64,
}

/// `ψ(x, t, r) = gaussian(x) · Σ_k c_k e^{2πi k·t} · weights[r]` on `G`.
/// `weights` is indexed by residues in lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiSpec {
    pub gaussian: Gaussian,
    pub trig: Vec<TrigTerm>,
    pub weights: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    pub phi: Gaussian,
    pub psi: PsiSpec,
}

fn residue_index(disc: &[u64], torsion: &[u64]) -> usize {
    disc.iter().zip(torsion).fold(0usize, |acc, (&r, &n)| acc * n as usize + r as usize)
}

impl PsiSpec {
    /// Gaussian on the real part, constant 1 on the torus and on `D`.
    pub fn gaussian(group: &GroupSpec, sigma: f64) -> Self {
        Self {
            gaussian: Gaussian::centered(group.d, sigma),
            trig: vec![TrigTerm { freq: vec![0; group.torus], coeff: Complex64::new(1.0, 0.0) }],
            weights: vec![Complex64::new(1.0, 0.0); group.torsion_order() as usize],
        }
    }

    pub fn validate(&self, group: &GroupSpec) -> Result<()> {
        if !(self.gaussian.sigma > 0.0) {
            return Err(Error::Precondition("ψ width must be positive".into()));
        }
        check_dim("ψ center", group.d, self.gaussian.center.len())?;
        check_dim("ψ weights", group.torsion_order() as usize, self.weights.len())?;
        for t in &self.trig {
            check_dim("ψ frequency", group.torus, t.freq.len())?;
        }
        Ok(())
    }

    pub fn eval(&self, g: &GroupElement, group: &GroupSpec) -> Complex64 {
        let trig: Complex64 = self
            .trig
            .iter()
            .map(|t| {
                let phase: f64 = t.freq.iter().zip(&g.torus).map(|(k, x)| *k as f64 * x).sum();
                t.coeff * Complex64::from_polar(1.0, TAU * phase)
            })
            .sum();
        self.weights[residue_index(&g.disc, &group.torsion)] * trig * self.gaussian.eval(&g.real)
    }

    /// `∫_G ψ` for Lebesgue × probability × counting measure.
    pub fn integral(&self) -> Complex64 {
        let c0: Complex64 = self.trig.iter().filter(|t| t.freq.iter().all(|&k| k == 0)).map(|t| t.coeff).sum();
        let w: Complex64 = self.weights.iter().sum();
        c0 * w * self.gaussian.integral()
    }

    /// `sup |ψ|` bound used by tail estimates.
    pub fn sup_bound(&self) -> f64 {
        let trig: f64 = self.trig.iter().map(|t| t.coeff.norm()).sum();
        let w = self.weights.iter().map(|w| w.norm()).fold(0.0, f64::max);
        trig * w
    }
}

impl TestFunctionSpec {
    pub fn gaussian_pair(m: usize, group: &GroupSpec, sigma_phi: f64, sigma_psi: f64) -> Self {
        Self { phi: Gaussian::centered(m, sigma_phi), psi: PsiSpec::gaussian(group, sigma_psi) }
    }

    pub fn validate(&self, m: usize, group: &GroupSpec) -> Result<()> {
        if !(self.phi.sigma > 0.0) {
            return Err(Error::Precondition("φ width must be positive".into()));
        }
        check_dim("φ center", m, self.phi.center.len())?;
        self.psi.validate(group)
    }

    /// `∫φ · ∫ψ`.
    pub fn integral(&self) -> Complex64 {
        self.psi.integral() * self.phi.integral()
    }
}
