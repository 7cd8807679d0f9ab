//! Half-open boxes, physical windows `S ⊂ ℝ^m` and spectra `K ⊂ Ĝ`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// `[lo_1, hi_1) × … × [lo_k, hi_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfOpenBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl HalfOpenBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_dim("box corners", lo.len(), hi.len())?;
        if lo.iter().chain(&hi).any(|x| x.is_nan()) {
            return Err(Error::Precondition("box corner is NaN".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self { lo: vec![lo], hi: vec![hi] }
    }

    /// `[lo, hi)^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self { lo: vec![lo; dim], hi: vec![hi; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.iter().chain(&self.hi).all(|x| x.is_finite())
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| b <= a)
    }

    pub fn volume(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *a <= *v && *v < *b)
    }

    pub fn translate(&self, v: &[f64]) -> Self {
        Self {
            lo: self.lo.iter().zip(v).map(|(a, t)| a + t).collect(),
            hi: self.hi.iter().zip(v).map(|(b, t)| b + t).collect(),
        }
    }

    /// Scale about the box center.
    pub fn dilate(&self, factor: f64) -> Self {
        let (lo, hi) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| {
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a) * factor;
                (c - h, c + h)
            })
            .unzip();
        Self { lo, hi }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((a0, a1), (b0, b1))| a0.max(*b0) < a1.min(*b1))
    }

    pub fn contains_box(&self, other: &Self) -> bool {
        other.is_empty()
            || self
                .lo
                .iter()
                .zip(&self.hi)
                .zip(other.lo.iter().zip(&other.hi))
                .all(|((a0, a1), (b0, b1))| a0 <= b0 && b1 <= a1)
    }

    /// Same box, negated: `-[a,b) = (-b,-a]`, reported as `[-b,-a)`.
    pub fn negated(&self) -> Self {
        Self {
            lo: self.hi.iter().map(|x| -x).collect(),
            hi: self.lo.iter().map(|x| -x).collect(),
        }
    }
}

fn check_disjoint(boxes: &[HalfOpenBox]) -> Result<()> {
    for (i, a) in boxes.iter().enumerate() {
        for b in &boxes[i + 1..] {
            if !a.is_empty() && !b.is_empty() && a.intersects(b) {
                return Err(Error::Precondition("window boxes overlap".into()));
            }
        }
    }
    Ok(())
}

/// Finite disjoint union of half-open boxes in the internal space `ℝ^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub boxes: Vec<HalfOpenBox>,
}

impl Window {
    pub fn new(boxes: Vec<HalfOpenBox>) -> Result<Self> {
        if let Some(first) = boxes.first() {
            for b in &boxes {
                check_dim("window box", first.dim(), b.dim())?;
                if !b.is_bounded() {
                    return Err(Error::Precondition("window boxes must be bounded".into()));
                }
            }
        }
        check_disjoint(&boxes)?;
        Ok(Self { boxes })
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self { boxes: vec![HalfOpenBox::interval(lo, hi)] }
    }

    pub fn dim(&self) -> Option<usize> {
        self.boxes.first().map(HalfOpenBox::dim)
    }

    pub fn measure(&self) -> f64 {
        self.boxes.iter().map(HalfOpenBox::volume).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.iter().all(HalfOpenBox::is_empty)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }

    /// Smallest box containing every piece, `None` when empty.
    pub fn bounding_box(&self) -> Option<HalfOpenBox> {
        let live: Vec<_> = self.boxes.iter().filter(|b| !b.is_empty()).collect();
        let first = live.first()?;
        let mut lo = first.lo.clone();
        let mut hi = first.hi.clone();
        for b in &live[1..] {
            for k in 0..lo.len() {
                lo[k] = lo[k].min(b.lo[k]);
                hi[k] = hi[k].max(b.hi[k]);
            }
        }
        Some(HalfOpenBox { lo, hi })
    }

    pub fn translate(&self, v: &[f64]) -> Self {
        Self { boxes: self.boxes.iter().map(|b| b.translate(v)).collect() }
    }

    /// Each piece scaled about the window's overall center.
    pub fn dilate(&self, factor: f64) -> Self {
        let Some(bb) = self.bounding_box() else {
            return self.clone();
        };
        let center: Vec<f64> = bb.lo.iter().zip(&bb.hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let boxes = self
            .boxes
            .iter()
            .map(|b| HalfOpenBox {
                lo: b.lo.iter().zip(&center).map(|(x, c)| c + (x - c) * factor).collect(),
                hi: b.hi.iter().zip(&center).map(|(x, c)| c + (x - c) * factor).collect(),
            })
            .collect();
        Self { boxes }
    }

    /// Symmetric up to the half-open boundary convention: every piece's
    /// mirror image is also a piece.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let close = |a: &HalfOpenBox, b: &HalfOpenBox| {
            a.lo.iter().zip(&b.lo).chain(a.hi.iter().zip(&b.hi)).all(|(x, y)| (x - y).abs() <= tol)
        };
        self.boxes.iter().all(|b| {
            let nb = b.negated();
            self.boxes.iter().any(|c| close(c, &nb))
        })
    }
}

/// Compact `K ⊂ Ĝ = ℝ^d × Z^ℓ × ⊕ Z_{n_i}`: real boxes × a finite set of
/// integer frequencies × a set of residue vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumWindow {
    pub real_boxes: Vec<HalfOpenBox>,
    #[serde(default)]
    pub zfreqs: Vec<Vec<i64>>,
    #[serde(default)]
    pub residues: Vec<Vec<u64>>,
}

impl SpectrumWindow {
    /// `real_boxes × {0} × {0}`, the usual case for torsion-free groups.
    pub fn real(real_boxes: Vec<HalfOpenBox>) -> Result<Self> {
        Self::new(real_boxes, vec![vec![]], vec![vec![]])
    }

    pub fn new(
        real_boxes: Vec<HalfOpenBox>,
        zfreqs: Vec<Vec<i64>>,
        residues: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if real_boxes.iter().any(|b| !b.is_bounded()) {
            return Err(Error::Precondition("spectrum must be compact".into()));
        }
        check_disjoint(&real_boxes)?;
        let mut z = zfreqs;
        z.sort();
        z.dedup();
        let mut r = residues;
        r.sort();
        r.dedup();
        Ok(Self { real_boxes, zfreqs: z, residues: r })
    }

    pub fn is_empty(&self) -> bool {
        self.zfreqs.is_empty()
            || self.residues.is_empty()
            || self.real_boxes.iter().all(HalfOpenBox::is_empty)
    }

    /// Haar measure under the dual normalization: Lebesgue on `ℝ^d`,
    /// counting on `Z^ℓ`, mass `1/|D|` per residue.
    pub fn measure(&self, torsion: &[u64]) -> f64 {
        let real: f64 = self.real_boxes.iter().map(HalfOpenBox::volume).sum();
        let order: u64 = torsion.iter().product();
        real * self.zfreqs.len() as f64 * self.residues.len() as f64 / order as f64
    }

    pub fn contains(&self, real: &[f64], zfreq: &[i64], disc: &[u64]) -> bool {
        self.real_boxes.iter().any(|b| b.contains(real))
            && self.zfreqs.iter().any(|z| z.as_slice() == zfreq)
            && self.residues.iter().any(|r| r.as_slice() == disc)
    }

    pub fn real_bounding_box(&self) -> Option<HalfOpenBox> {
        Window { boxes: self.real_boxes.clone() }.bounding_box()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_open_membership() {
        let b = HalfOpenBox::interval(0.0, 1.0);
        assert!(b.contains(&[0.0]));
        assert!(!b.contains(&[1.0]));
        assert!(!b.contains(&[-1e-300]));
    }

    #[test]
    fn overlapping_windows_rejected() {
        let w = Window::new(vec![HalfOpenBox::interval(0.0, 1.0), HalfOpenBox::interval(0.5, 2.0)]);
        assert!(w.is_err());
        let w = Window::new(vec![HalfOpenBox::interval(0.0, 1.0), HalfOpenBox::interval(1.0, 2.0)]).unwrap();
        assert_eq!(w.measure(), 2.0);
    }

    #[test]
    fn symmetric_windows() {
        assert!(Window::interval(-1.0, 1.0).is_symmetric(1e-12));
        assert!(!Window::interval(0.0, 1.0).is_symmetric(1e-12));
        let w = Window::new(vec![HalfOpenBox::interval(-3.0, -1.0), HalfOpenBox::interval(1.0, 3.0)]).unwrap();
        assert!(w.is_symmetric(1e-12));
    }

    #[test]
    fn spectrum_measure_uses_dual_normalization() {
        let k = SpectrumWindow::new(
            vec![HalfOpenBox::interval(0.0, 0.4)],
            vec![vec![]],
            vec![vec![0], vec![1]],
        )
        .unwrap();
        assert!((k.measure(&[2]) - 0.4).abs() < 1e-15);
        let half = SpectrumWindow::new(vec![HalfOpenBox::interval(0.0, 0.4)], vec![vec![]], vec![vec![1]]).unwrap();
        assert!((half.measure(&[2]) - 0.2).abs() < 1e-15);
    }
}
