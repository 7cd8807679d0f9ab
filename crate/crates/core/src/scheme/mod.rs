//! Cut-and-project schemes `(ℝ^m, G, H)`: existence, construction of the
//! lattice `H`, its dual `Γ = H^⊥`, and the two projections on each side.
//!
//! `H` is stored as a lifted lattice `H̃ = B·Z^N ⊂ ℝ^N`, `N = m+d+ℓ+t`.
//! Rows of `B` are laid out as internal `ℝ^m`, physical `ℝ^d`, torus lift
//! (reduced mod 1) and torsion lift (row `x` ↦ residue `n_i·x mod n_i`).
//! The kernel of the lift, `{0}^{m+d} × Z^{ℓ+t}`, is contained in `H̃`, so
//! `H = H̃ / Z^{ℓ+t}`. Dually `Γ̃ = B^{-T}·Z^N`, its torus rows are integer
//! frequencies and its torsion rows are integers read mod `n_i`.

mod structure;

pub use structure::{structure_check, StructureReport};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::group::{reduce_unit, DualElement, GroupElement, GroupSpec};
use crate::primes::{independent_vector, norm, prime_factors, rank_p};

/// Verdict of [`scheme_exists`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Existence {
    Exists,
    Obstructed { prime: u64, rank: usize },
}

/// A complete scheme over `ℝ^m × G` exists iff no `p`-rank of `D` exceeds
/// `m + d`. Reports the smallest offending prime.
pub fn scheme_exists(m: usize, group: &GroupSpec) -> Existence {
    let mut primes: Vec<u64> =
        group.torsion.iter().flat_map(|&n| prime_factors(n).into_iter().map(|(p, _)| p)).collect();
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        let rank = rank_p(&group.torsion, p).expect("factor of a cyclic order is prime");
        if rank > m + group.d {
            return Existence::Obstructed { prime: p, rank };
        }
    }
    Existence::Exists
}

/// `T_{α,β}`: zero diagonal blocks, `αβᵀ` top right, `βαᵀ` bottom left.
pub fn build_t(alpha: &[f64], beta: &[f64]) -> Result<DMatrix<f64>> {
    let (m, d) = (alpha.len(), beta.len());
    let bound = norm(alpha) * norm(beta);
    if bound >= 1.0 {
        return Err(Error::Precondition(format!("|alpha|*|beta| = {bound} must be < 1")));
    }
    let mut t = DMatrix::zeros(m + d, m + d);
    for i in 0..m {
        for j in 0..d {
            t[(i, m + j)] = alpha[i] * beta[j];
            t[(m + j, i)] = beta[j] * alpha[i];
        }
    }
    Ok(t)
}

/// Shape of the `(m+d) × (m+d)` block generating the zero fiber.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseForm {
    /// `(I + T_{α,β})·Z^{m+d}`, valid for every `m, d`.
    #[default]
    Coupled,
    /// `{(n + αk, n + βk)}` for `m = d = 1`; covolume `|β − α|`.
    Sturmian,
}

/// Finite stand-in for an infinite divisible factor of `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Truncation {
    /// `Z(p^∞)` cut at level `s`, i.e. the factor `Z_{p^s}`.
    Prufer { p: u64, s: u32 },
    /// `ℚ` cut to denominators dividing `Q` (mod 1), i.e. `Z_Q`.
    Rational { q_denominator: u64 },
}

impl Truncation {
    fn order(&self) -> Result<u64> {
        match *self {
            Truncation::Prufer { p, s } => {
                if !crate::primes::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                if s == 0 {
                    return Err(Error::Precondition("Prüfer truncation level must be >= 1".into()));
                }
                p.checked_pow(s).ok_or_else(|| Error::Precondition("truncation order overflows".into()))
            }
            Truncation::Rational { q_denominator } if q_denominator >= 2 => Ok(q_denominator),
            Truncation::Rational { .. } => Err(Error::Precondition("q_denominator must be >= 2".into())),
        }
    }
}

/// JSON scheme descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeDescriptor {
    pub m: usize,
    pub group: GroupSpec,
    #[serde(default)]
    pub prime_offset: usize,
    /// 1-based slot per cyclic factor (group factors, then truncations).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_slots: Option<Vec<usize>>,
    #[serde(default)]
    pub truncations: Vec<Truncation>,
    #[serde(default)]
    pub form: BaseForm,
}

impl SchemeDescriptor {
    pub fn new(m: usize, group: GroupSpec) -> Self {
        Self { m, group, prime_offset: 0, torsion_slots: None, truncations: vec![], form: BaseForm::Coupled }
    }

    /// The `m = d = 1` scheme `H = {(n + αk, n + βk)}` with torsion added on top.
    pub fn sturmian(torsion: Vec<u64>) -> Self {
        Self { form: BaseForm::Sturmian, ..Self::new(1, GroupSpec { d: 1, torus: 0, torsion }) }
    }

    /// Group including the cyclic factors contributed by truncations.
    pub fn effective_group(&self) -> Result<GroupSpec> {
        let mut g = self.group.clone();
        for t in &self.truncations {
            g.torsion.push(t.order()?);
        }
        g.validate()?;
        Ok(g)
    }
}

/// Which translation coordinate carries the `p`-part of a cyclic factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotAssignment {
    pub prime: u64,
    pub prime_power: u64,
    /// 0-based, in `0..m+d`.
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpSchemeParams {
    pub m: usize,
    pub group: GroupSpec,
    pub form: BaseForm,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub eta: Vec<f64>,
    pub prime_offset: usize,
    pub slots: Vec<Vec<SlotAssignment>>,
}

impl CpSchemeParams {
    /// Draw `α, β, γ, η` as consecutive blocks of `1/√p` values, raising the
    /// prime offset until `‖α‖‖β‖ < 1`, and assign torsion slots.
    pub fn from_descriptor(desc: &SchemeDescriptor) -> Result<Self> {
        Self::resolve(desc, false)
    }

    fn resolve(desc: &SchemeDescriptor, allow_obstructed: bool) -> Result<Self> {
        let group = desc.effective_group()?;
        let m = desc.m;
        if m == 0 {
            return Err(Error::Precondition("internal dimension m must be >= 1".into()));
        }
        if group.d == 0 {
            return Err(Error::Precondition("schemes need a real factor (d >= 1)".into()));
        }
        if desc.form == BaseForm::Sturmian && (m != 1 || group.d != 1) {
            return Err(Error::Precondition("sturmian form needs m = d = 1".into()));
        }
        if !allow_obstructed {
            if let Existence::Obstructed { prime, rank } = scheme_exists(m, &group) {
                return Err(Error::Obstructed { prime, rank, slots: m + group.d });
            }
        }
        let (d, l) = (group.d, group.torus);
        let kq = desc.truncations.iter().filter(|t| matches!(t, Truncation::Rational { .. })).count();
        let mut s = desc.prime_offset;
        let v = loop {
            let (v, _) = independent_vector(m + d + l + kq, None, s);
            if norm(&v[..m]) * norm(&v[m..m + d]) < 1.0 {
                break v;
            }
            s += 1;
        };
        let slots = assign_slots(m + d, &group.torsion, desc.torsion_slots.as_deref(), allow_obstructed)?;
        Ok(Self {
            m,
            form: desc.form,
            alpha: v[..m].to_vec(),
            beta: v[m..m + d].to_vec(),
            gamma: v[m + d..m + d + l].to_vec(),
            eta: v[m + d + l..].to_vec(),
            prime_offset: s,
            slots,
            group,
        })
    }
}

fn assign_slots(
    nslots: usize,
    torsion: &[u64],
    manual: Option<&[usize]>,
    wrap: bool,
) -> Result<Vec<Vec<SlotAssignment>>> {
    let factored: Vec<Vec<(u64, u32)>> = torsion.iter().map(|&n| prime_factors(n)).collect();
    let mut out: Vec<Vec<SlotAssignment>> = vec![vec![]; torsion.len()];
    match manual {
        Some(manual) => {
            check_dim("torsion_slots", torsion.len(), manual.len())?;
            let mut taken: Vec<(u64, usize)> = vec![];
            for (i, (fac, &slot1)) in factored.iter().zip(manual).enumerate() {
                if slot1 == 0 || slot1 > nslots {
                    return Err(Error::Precondition(format!("slot {slot1} outside 1..={nslots}")));
                }
                let slot = slot1 - 1;
                for &(p, e) in fac {
                    if taken.contains(&(p, slot)) && !wrap {
                        return Err(Error::SlotCollision { factor: i, prime: p, slot: slot1 });
                    }
                    taken.push((p, slot));
                    out[i].push(SlotAssignment { prime: p, prime_power: p.pow(e), slot });
                }
            }
        }
        None => {
            let mut next: Vec<(u64, usize)> = vec![];
            for (i, fac) in factored.iter().enumerate() {
                for &(p, e) in fac {
                    let counter = match next.iter_mut().find(|(q, _)| *q == p) {
                        Some((_, c)) => c,
                        None => {
                            next.push((p, 0));
                            &mut next.last_mut().unwrap().1
                        }
                    };
                    let slot = *counter;
                    *counter += 1;
                    if slot >= nslots && !wrap {
                        return Err(Error::SlotCollision { factor: i, prime: p, slot: nslots });
                    }
                    out[i].push(SlotAssignment { prime: p, prime_power: p.pow(e), slot: slot % nslots });
                }
            }
        }
    }
    Ok(out)
}

/// Row/column layout of a lifted basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub m: usize,
    pub d: usize,
    pub torus: usize,
    pub torsion: Vec<u64>,
}

impl Layout {
    pub fn dim(&self) -> usize {
        self.m + self.d + self.torus + self.torsion.len()
    }
    pub fn main(&self) -> usize {
        self.m + self.d
    }
    pub fn torus_row(&self, k: usize) -> usize {
        self.m + self.d + k
    }
    pub fn torsion_row(&self, i: usize) -> usize {
        self.m + self.d + self.torus + i
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Primal,
    Dual,
}

/// `N × N` matrix whose columns generate a lifted lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBasis {
    pub matrix: DMatrix<f64>,
    pub layout: Layout,
    pub side: Side,
}

impl LatticeBasis {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn det(&self) -> f64 {
        self.matrix.clone().lu().determinant()
    }

    pub fn apply(&self, z: &[i64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for (j, &zj) in z.iter().enumerate() {
            if zj != 0 {
                let zf = zj as f64;
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi += self.matrix[(i, j)] * zf;
                }
            }
        }
        y
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.matrix.row(i).iter().copied().collect()).collect()
    }
}

/// A complete scheme: parameters, lifted bases of `H` and `Γ`, and `s(H)`.
#[derive(Clone, Debug)]
pub struct CpScheme {
    pub params: CpSchemeParams,
    pub basis: LatticeBasis,
    pub dual_basis: LatticeBasis,
    /// `B^{-1}`, i.e. the transpose of the dual basis matrix.
    pub inverse: DMatrix<f64>,
    pub section_mass: f64,
}

/// Offset of the torsion-lift consistency check.
const LIFT_TOL: f64 = 1e-9;

pub fn build_scheme(desc: &SchemeDescriptor) -> Result<CpScheme> {
    CpScheme::from_params(CpSchemeParams::from_descriptor(desc)?)
}

/// Builds the lattice even when the group is obstructed; slots that run
/// out wrap around. Exists so obstructions can be observed numerically.
#[doc(hidden)]
pub fn build_scheme_forced(desc: &SchemeDescriptor) -> Result<CpScheme> {
    CpScheme::from_params(CpSchemeParams::resolve(desc, true)?)
}

impl CpScheme {
    pub fn from_params(params: CpSchemeParams) -> Result<Self> {
        let group = &params.group;
        let layout = Layout { m: params.m, d: group.d, torus: group.torus, torsion: group.torsion.clone() };
        let (main, n) = (layout.main(), layout.dim());

        let base = match params.form {
            BaseForm::Coupled => DMatrix::identity(main, main) + build_t(&params.alpha, &params.beta)?,
            BaseForm::Sturmian => {
                DMatrix::from_row_slice(2, 2, &[1.0, params.alpha[0], 1.0, params.beta[0]])
            }
        };

        let mut b = DMatrix::zeros(n, n);
        b.view_mut((0, 0), (main, main)).copy_from(&base);
        // the n_1 column drives the torus coordinates: omega_gamma^{n_1}
        for (k, g) in params.gamma.iter().enumerate() {
            b[(layout.torus_row(k), 0)] = params.alpha[0] * g;
        }
        for k in 0..layout.torus {
            let r = layout.torus_row(k);
            b[(r, r)] = 1.0;
        }
        for (i, (&order, slots)) in layout.torsion.iter().zip(&params.slots).enumerate() {
            let col = layout.torsion_row(i);
            for s in slots {
                let w = 1.0 / s.prime_power as f64;
                for r in 0..n {
                    let v = b[(r, s.slot)];
                    b[(r, col)] += w * v;
                }
            }
            b[(col, col)] = 1.0 / order as f64;
        }

        let lu = b.clone().lu();
        let det = lu.determinant();
        if !det.is_finite() || det.abs() < 1e-300 {
            return Err(Error::Singular);
        }
        let inverse = lu.try_inverse().ok_or(Error::Singular)?;
        let dual = inverse.transpose();
        let order = group.torsion_order() as f64;
        let scheme = Self {
            section_mass: det.abs() * order,
            basis: LatticeBasis { matrix: b, layout: layout.clone(), side: Side::Primal },
            dual_basis: LatticeBasis { matrix: dual, layout, side: Side::Dual },
            inverse,
            params,
        };
        let resid = scheme.dual_residual();
        if resid > 1e-10 {
            return Err(Error::Inconsistent(format!("|B^T B^-T - I| = {resid:e}")));
        }
        Ok(scheme)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.params.group
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn layout(&self) -> &Layout {
        &self.basis.layout
    }

    /// `s(Γ) = |det B^{-T}| / |D|`.
    pub fn dual_section_mass(&self) -> f64 {
        self.dual_basis.det().abs() / self.group().torsion_order() as f64
    }

    /// `‖Bᵀ·B^{-T} − I‖_∞` (max entry).
    pub fn dual_residual(&self) -> f64 {
        let prod = self.basis.matrix.transpose() * &self.dual_basis.matrix;
        let n = prod.nrows();
        (prod - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// Map a lifted point `y = B z` to `(p1, p2)`.
    pub fn split_primal(&self, y: &[f64]) -> Result<(Vec<f64>, GroupElement)> {
        let l = self.layout();
        let p1 = y[..l.m].to_vec();
        let real = y[l.m..l.main()].to_vec();
        let torus = (0..l.torus).map(|k| reduce_unit(y[l.torus_row(k)])).collect();
        let mut disc = Vec::with_capacity(l.torsion.len());
        for (i, &order) in l.torsion.iter().enumerate() {
            let x = y[l.torsion_row(i)] * order as f64;
            let r = x.round();
            if (x - r).abs() > LIFT_TOL * x.abs().max(1.0) {
                return Err(Error::Inconsistent(format!(
                    "torsion lift {} is not a multiple of 1/{order}",
                    y[l.torsion_row(i)]
                )));
            }
            disc.push((r as i64).rem_euclid(order as i64) as u64);
        }
        Ok((p1, GroupElement { real, torus, disc }))
    }

    /// `(p1(h), p2(h))` for `h = B z`.
    pub fn project_point(&self, z: &[i64]) -> Result<(Vec<f64>, GroupElement)> {
        check_dim("lattice coordinates", self.basis.dim(), z.len())?;
        self.split_primal(&self.basis.apply(z))
    }

    /// Map a lifted dual point `ŷ = B^{-T} w` to `(q1, q2)`.
    pub fn split_dual(&self, y: &[f64]) -> Result<(Vec<f64>, DualElement)> {
        let l = self.layout();
        let q1 = y[..l.m].to_vec();
        let real = y[l.m..l.main()].to_vec();
        let as_int = |v: f64, what: &str| -> Result<i64> {
            let r = v.round();
            if (v - r).abs() > LIFT_TOL * v.abs().max(1.0) {
                return Err(Error::Inconsistent(format!("dual {what} row {v} is not an integer")));
            }
            Ok(r as i64)
        };
        let zfreq = (0..l.torus).map(|k| as_int(y[l.torus_row(k)], "torus")).collect::<Result<_>>()?;
        let mut disc = Vec::with_capacity(l.torsion.len());
        for (i, &order) in l.torsion.iter().enumerate() {
            disc.push(as_int(y[l.torsion_row(i)], "torsion")?.rem_euclid(order as i64) as u64);
        }
        Ok((q1, DualElement { real, zfreq, disc }))
    }

    /// `(q1(γ), q2(γ))` for `γ = B^{-T} w`.
    pub fn dual_project(&self, w: &[i64]) -> Result<(Vec<f64>, DualElement)> {
        check_dim("dual lattice coordinates", self.dual_basis.dim(), w.len())?;
        self.split_dual(&self.dual_basis.apply(w))
    }

    /// Lattice coordinates of one representative per element of `H` whose
    /// translation part has `‖·‖∞ ≤ radius`: main coordinates in
    /// `[-radius, radius]`, torus coordinates 0, torsion coordinates over a
    /// full residue system.
    pub fn representatives(&self, radius: i64) -> Vec<Vec<i64>> {
        let l = self.layout();
        let mut ranges: Vec<(i64, i64)> = vec![(-radius, radius); l.main()];
        ranges.extend(std::iter::repeat_n((0, 0), l.torus));
        ranges.extend(l.torsion.iter().map(|&n| (0, n as i64 - 1)));
        crate::enumerate::grid(&ranges)
    }
}

/// Serializable summary written by `scheme build`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeFile {
    pub descriptor: SchemeDescriptor,
    pub params: CpSchemeParams,
    pub layout: Layout,
    /// Row-major `B`.
    pub basis: Vec<Vec<f64>>,
    /// Row-major `B^{-T}`.
    pub dual_basis: Vec<Vec<f64>>,
    pub section_mass: f64,
    pub dual_section_mass: f64,
}

impl SchemeFile {
    pub fn new(descriptor: SchemeDescriptor, scheme: &CpScheme) -> Self {
        Self {
            descriptor,
            params: scheme.params.clone(),
            layout: scheme.layout().clone(),
            basis: scheme.basis.rows(),
            dual_basis: scheme.dual_basis.rows(),
            section_mass: scheme.section_mass,
            dual_section_mass: scheme.dual_section_mass(),
        }
    }
}

#[cfg(test)]
mod tests;
