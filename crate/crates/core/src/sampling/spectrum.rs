//! Frequency grids and random spectra.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{DualElement, GroupSpec};
use crate::window::{HalfOpenBox, SpectrumWindow};

/// Grid points `lo + kδ` of every real box, crossed with the integer
/// frequencies and residues of `k`.
pub fn make_spectrum(k: &SpectrumWindow, delta: f64) -> Result<Vec<DualElement>> {
    if !(delta > 0.0) {
        return Err(Error::Precondition("δ must be positive".into()));
    }
    let mut out = vec![];
    for b in &k.real_boxes {
        let mut axes = vec![];
        for (lo, hi) in b.lo.iter().zip(&b.hi) {
            let count = ((hi - lo) / delta + 1e-9).floor() as i64;
            if count < 1 {
                return Err(Error::Precondition(format!("δ = {delta} exceeds box side {}", hi - lo)));
            }
            axes.push((0, count - 1));
        }
        for idx in crate::enumerate::grid(&axes) {
            let real: Vec<f64> = idx.iter().zip(&b.lo).map(|(i, lo)| lo + *i as f64 * delta).collect();
            for z in &k.zfreqs {
                for r in &k.residues {
                    out.push(DualElement { real: real.clone(), zfreq: z.clone(), disc: r.clone() });
                }
            }
        }
    }
    Ok(out)
}

/// Split `total` into `parts` positive integers.
fn positive_split<R: Rng>(total: usize, parts: usize, rng: &mut R) -> Vec<usize> {
    let mut cuts: Vec<usize> = (1..total).collect::<Vec<_>>().choose_multiple(rng, parts - 1).copied().collect();
    cuts.sort();
    cuts.insert(0, 0);
    cuts.push(total);
    cuts.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Split `total` into `parts` non-negative integers.
fn nonneg_split<R: Rng>(total: usize, parts: usize, rng: &mut R) -> Vec<usize> {
    positive_split(total + parts, parts, rng).into_iter().map(|x| x - 1).collect()
}

/// Random spectrum of measure `≈ mu` inside `band × Z^ℓ × D̂` of the dual of
/// `group` (which must have `d = 1`): between one and four disjoint
/// intervals with endpoints on the `δ`-grid, a random nonempty set of
/// residues and, on a torus, one or two integer frequencies in `[-2, 2]^ℓ`.
pub fn random_spectrum<R: Rng>(
    group: &GroupSpec,
    mu: f64,
    band: (f64, f64),
    delta: f64,
    rng: &mut R,
) -> Result<SpectrumWindow> {
    if group.d != 1 {
        return Err(Error::Precondition("random spectra need d = 1".into()));
    }
    let zfreqs = if group.torus == 0 {
        vec![vec![]]
    } else {
        let mut pool = crate::enumerate::grid(&vec![(-2, 2); group.torus]);
        pool.shuffle(rng);
        pool.truncate(rng.gen_range(1..=2));
        pool.sort();
        pool
    };
    let mut residues = group.residues();
    residues.shuffle(rng);
    // enough residues that the real part fits the band
    let order = group.torsion_order() as f64;
    let need = ((mu * order / (zfreqs.len() as f64 * (band.1 - band.0))).ceil() as usize).max(1);
    if need > residues.len() {
        return Err(Error::Precondition(format!("measure {mu} does not fit the band")));
    }
    residues.truncate(rng.gen_range(need..=residues.len()));
    residues.sort();
    let copies = (residues.len() * zfreqs.len()) as f64 / order;
    let cells = (mu / copies / delta).round() as usize;
    let band_cells = ((band.1 - band.0) / delta + 1e-9).floor() as usize;
    if cells == 0 || cells > band_cells {
        return Err(Error::Precondition(format!("measure {mu} does not fit the band at δ = {delta}")));
    }
    let pieces = rng.gen_range(1..=4usize).min(cells).min(band_cells - cells + 1);
    let lengths = positive_split(cells, pieces, rng);
    // interior gaps at least one cell keep the intervals disjoint
    let mut gaps = nonneg_split(band_cells - cells - (pieces - 1), pieces + 1, rng);
    for g in &mut gaps[1..pieces] {
        *g += 1;
    }
    let mut boxes = vec![];
    let mut at = gaps[0];
    for (i, len) in lengths.iter().enumerate() {
        let lo = band.0 + at as f64 * delta;
        boxes.push(HalfOpenBox::interval(lo, lo + *len as f64 * delta));
        at += len + gaps[i + 1];
    }
    SpectrumWindow::new(boxes, zfreqs, residues)
}

/// `pieces` intervals of total length `≈ mu`, starting at multiples of
/// `spacing`.
pub fn separated_spectrum(mu: f64, pieces: usize, spacing: f64, delta: f64) -> Result<SpectrumWindow> {
    let cells = (mu / pieces as f64 / delta).round().max(1.0);
    if cells * delta >= spacing {
        return Err(Error::Precondition("pieces overlap".into()));
    }
    let boxes = (0..pieces)
        .map(|i| {
            let lo = i as f64 * spacing;
            HalfOpenBox::interval(lo, lo + cells * delta)
        })
        .collect();
    SpectrumWindow::real(boxes)
}
