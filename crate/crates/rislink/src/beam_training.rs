//! Two-stage hierarchical beam training over binary-tree codebooks.
//!
//! Neither end knows the channel; the only feedback is the achieved rate
//! of a candidate configuration, abstracted as [`RateProbe`]. Training
//! first fixes an omnidirectional transmit pattern and descends the
//! receive codebook layer by layer, probing the two children of the kept
//! codeword at every layer; it then fixes the winning combiner and
//! descends the transmit codebook the same way. The total cost is exactly
//! `2*log2(n_rx) + 2*log2(n_tx)` probes.

use ndarray::Array1;
use num_complex::Complex64;

use crate::codebook::HierarchicalCodebook;
use crate::ris_search::ReflectionConfig;

/// Rate measurement for a candidate (transmit beam, receive combiner,
/// reflection configuration) triple.
///
/// Implementations must be deterministic: probing the same triple twice
/// returns the same value. The optimizers rely on this for their
/// monotonicity guarantees.
pub trait RateProbe {
    fn rate(
        &mut self,
        w: &Array1<Complex64>,
        f: &Array1<Complex64>,
        phi: &ReflectionConfig,
    ) -> f64;
}

impl<F> RateProbe for F
where
    F: FnMut(&Array1<Complex64>, &Array1<Complex64>, &ReflectionConfig) -> f64,
{
    fn rate(
        &mut self,
        w: &Array1<Complex64>,
        f: &Array1<Complex64>,
        phi: &ReflectionConfig,
    ) -> f64 {
        self(w, f, phi)
    }
}

/// Wrapper counting how many probes the inner probe served; used to verify
/// the training and search budgets.
pub struct CountingProbe<P> {
    inner: P,
    count: usize,
}

impl<P> CountingProbe<P> {
    pub fn new(inner: P) -> Self {
        CountingProbe { inner, count: 0 }
    }

    /// Probes served so far.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn into_inner(self) -> P {
        self.inner
    }
}

impl<P: RateProbe> RateProbe for CountingProbe<P> {
    fn rate(
        &mut self,
        w: &Array1<Complex64>,
        f: &Array1<Complex64>,
        phi: &ReflectionConfig,
    ) -> f64 {
        self.count += 1;
        self.inner.rate(w, f, phi)
    }
}

/// Quasi-omnidirectional pattern used while the other end trains: all
/// power on the first antenna.
pub fn omni_codeword(n: usize) -> Array1<Complex64> {
    assert!(n >= 1, "array must have at least one element");
    let mut w = Array1::zeros(n);
    w[0] = Complex64::new(1.0, 0.0);
    w
}

/// Outcome of one two-stage training run.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSearchResult {
    /// Winning transmit beam (bottom-layer codeword).
    pub w: Array1<Complex64>,
    /// Winning receive combiner (bottom-layer codeword).
    pub f: Array1<Complex64>,
    /// Kept transmit codeword index per layer (1-based), layer 1 first.
    pub tx_path: Vec<usize>,
    /// Kept receive codeword index per layer (1-based), layer 1 first.
    pub rx_path: Vec<usize>,
}

impl BeamSearchResult {
    /// 1-based index of the winning transmit leaf.
    pub fn tx_leaf(&self) -> usize {
        *self.tx_path.last().expect("codebook has at least one layer")
    }

    /// 1-based index of the winning receive leaf.
    pub fn rx_leaf(&self) -> usize {
        *self.rx_path.last().expect("codebook has at least one layer")
    }
}

/// Descends one codebook from layer 1 to the bottom, probing the two
/// children of the kept codeword at each layer. Rate ties keep the
/// lower-indexed child.
fn descend<P: RateProbe + ?Sized>(
    probe: &mut P,
    codebook: &HierarchicalCodebook,
    phi: &ReflectionConfig,
    mut rate_of: impl FnMut(&mut P, &Array1<Complex64>, &ReflectionConfig) -> f64,
) -> Vec<usize> {
    let mut path = Vec::with_capacity(codebook.last_layer());
    let mut kept = 1usize;
    for layer in 1..=codebook.last_layer() {
        let (lo, hi) = (2 * kept - 1, 2 * kept);
        let rate_lo = rate_of(probe, codebook.codeword(layer, lo), phi);
        let rate_hi = rate_of(probe, codebook.codeword(layer, hi), phi);
        kept = if rate_hi > rate_lo { hi } else { lo };
        path.push(kept);
    }
    path
}

/// Two-stage hierarchical search: receive side under an omnidirectional
/// transmit pattern, then transmit side under the winning combiner. The
/// reflection configuration is held fixed throughout.
pub fn hierarchical_search<P: RateProbe + ?Sized>(
    probe: &mut P,
    codebook_tx: &HierarchicalCodebook,
    codebook_rx: &HierarchicalCodebook,
    phi: &ReflectionConfig,
) -> BeamSearchResult {
    let omni = omni_codeword(codebook_tx.n());
    let rx_path = descend(probe, codebook_rx, phi, |p, cand, phi| {
        p.rate(&omni, cand, phi)
    });
    let f = codebook_rx
        .codeword(codebook_rx.last_layer(), *rx_path.last().unwrap())
        .clone();
    let tx_path = descend(probe, codebook_tx, phi, |p, cand, phi| {
        p.rate(cand, &f, phi)
    });
    let w = codebook_tx
        .codeword(codebook_tx.last_layer(), *tx_path.last().unwrap())
        .clone();
    BeamSearchResult {
        w,
        f,
        tx_path,
        rx_path,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{beam_gain, beam_gain_sin, build_codebook};
    use std::cell::RefCell;

    fn any_phi() -> ReflectionConfig {
        ReflectionConfig::zeros(4, 2).unwrap()
    }

    #[test]
    fn omni_codeword_is_first_basis_vector() {
        let w = omni_codeword(4);
        assert_eq!(w[0], Complex64::new(1.0, 0.0));
        for i in 1..4 {
            assert_eq!(w[i], Complex64::new(0.0, 0.0));
        }
        assert_eq!(omni_codeword(1).len(), 1);
    }

    #[test]
    fn omni_codeword_has_flat_gain() {
        for n in [2usize, 8] {
            let w = omni_codeword(n);
            for t in 0..64 {
                let x = -1.0 + 2.0 * t as f64 / 64.0;
                assert!((beam_gain_sin(&w, x) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn probe_budget_is_two_per_layer() {
        let cb_tx = build_codebook(8).unwrap();
        let cb_rx = build_codebook(4).unwrap();
        let mut probe = CountingProbe::new(
            |_: &Array1<Complex64>, _: &Array1<Complex64>, _: &ReflectionConfig| 1.0f64,
        );
        hierarchical_search(&mut probe, &cb_tx, &cb_rx, &any_phi());
        assert_eq!(probe.count(), 2 * 3 + 2 * 2);
    }

    #[test]
    fn constant_probe_keeps_lowest_indices() {
        let cb_tx = build_codebook(8).unwrap();
        let cb_rx = build_codebook(8).unwrap();
        let mut probe =
            |_: &Array1<Complex64>, _: &Array1<Complex64>, _: &ReflectionConfig| 1.0f64;
        let out = hierarchical_search(&mut probe, &cb_tx, &cb_rx, &any_phi());
        assert_eq!(out.tx_path, vec![1, 1, 1]);
        assert_eq!(out.rx_path, vec![1, 1, 1]);
        assert_eq!(out.w, *cb_tx.codeword(3, 1));
        assert_eq!(out.f, *cb_rx.codeword(3, 1));
    }

    /// Synthetic single-path link: rate grows with the product of the two
    /// beam gains toward fixed directions.
    fn directional_probe(
        psi_tx: f64,
        psi_rx: f64,
    ) -> impl FnMut(&Array1<Complex64>, &Array1<Complex64>, &ReflectionConfig) -> f64 {
        move |w, f, _| {
            let g = beam_gain(w, psi_tx) * beam_gain(f, psi_rx);
            (1.0 + g * g).log2()
        }
    }

    #[test]
    fn descent_keeps_children_of_kept_codewords() {
        let cb = build_codebook(16).unwrap();
        let mut probe = directional_probe(0.35, -0.8);
        let out = hierarchical_search(&mut probe, &cb, &cb, &any_phi());
        for path in [&out.tx_path, &out.rx_path] {
            assert_eq!(path.len(), 4);
            assert!(path[0] == 1 || path[0] == 2);
            for pair in path.windows(2) {
                assert!(pair[1] == 2 * pair[0] - 1 || pair[1] == 2 * pair[0]);
            }
        }
    }

    #[test]
    fn four_element_search_finds_the_nearest_leaf() {
        // Target direction sits inside leaf 2's cell (sine -0.2, cells
        // centred at -3/4, -1/4, 1/4, 3/4); brute force over the leaves
        // confirms it is the best, and the descent must agree.
        let cb = build_codebook(4).unwrap();
        let psi = (-0.2f64).asin();
        let brute_best = (1..=4)
            .max_by(|&a, &b| {
                beam_gain(cb.codeword(2, a), psi).total_cmp(&beam_gain(cb.codeword(2, b), psi))
            })
            .unwrap();
        assert_eq!(brute_best, 2);
        let mut probe = directional_probe(psi, psi);
        let out = hierarchical_search(&mut probe, &cb, &cb, &any_phi());
        assert_eq!(out.tx_leaf(), 2);
        assert_eq!(out.rx_leaf(), 2);
    }

    #[test]
    fn two_element_search_is_exhaustive_over_leaf_pairs() {
        let cb = build_codebook(2).unwrap();
        let mut best = f64::NEG_INFINITY;
        for wi in 1..=2 {
            for fi in 1..=2 {
                let mut probe = directional_probe(0.6, 0.6);
                let r = probe.rate(cb.codeword(1, wi), cb.codeword(1, fi), &any_phi());
                best = best.max(r);
            }
        }
        let mut probe = directional_probe(0.6, 0.6);
        let out = hierarchical_search(&mut probe, &cb, &cb, &any_phi());
        let mut check = directional_probe(0.6, 0.6);
        let achieved = check.rate(&out.w, &out.f, &any_phi());
        assert!((achieved - best).abs() < 1e-12);
    }

    #[test]
    fn kept_child_never_loses_to_its_sibling() {
        // Log every probe, then replay the descent decisions: at each
        // layer the kept child's probed rate must be the pairwise max
        // (ties to the lower index).
        let log: RefCell<Vec<f64>> = RefCell::new(Vec::new());
        let cb = build_codebook(16).unwrap();
        let mut inner = directional_probe(-0.15, 0.5);
        let mut probe = |w: &Array1<Complex64>, f: &Array1<Complex64>, phi: &ReflectionConfig| {
            let r = inner(w, f, phi);
            log.borrow_mut().push(r);
            r
        };
        let out = hierarchical_search(&mut probe, &cb, &cb, &any_phi());
        let rates = log.borrow();
        let mut cursor = 0;
        for path in [&out.rx_path, &out.tx_path] {
            let mut kept = 1usize;
            for &next in path.iter() {
                let (rate_lo, rate_hi) = (rates[cursor], rates[cursor + 1]);
                cursor += 2;
                let expect = if rate_hi > rate_lo {
                    2 * kept
                } else {
                    2 * kept - 1
                };
                assert_eq!(next, expect);
                kept = next;
            }
        }
        assert_eq!(cursor, rates.len());
    }
}
