//! Rate probe over one user's hidden channel pair, with beam caching.
//!
//! The optimizers only ever see rates, never the channel matrices. A naive
//! probe would rebuild the full cascaded channel per query; this one
//! exploits the cascade structure
//!
//! ```text
//! f^H (G diag(e^{j phi}) H)^H w  =  sum_m conj(u_m) v_m e^{-j phi_m},
//! u = G^H w,  v = H f
//! ```
//!
//! so a probe that reuses the previous beams costs O(M). The per-element
//! products are recomputed from scratch on every query (never updated
//! incrementally), so identical inputs always produce bit-identical rates;
//! the optimizer monotonicity guarantees rely on that.

use crate::beam_training::RateProbe;
use crate::ris_search::ReflectionConfig;
use ndarray::{Array1, Array2};
use num_complex::Complex64;

/// [`RateProbe`] over a fixed `(G, H)` channel pair for one user.
pub struct CachingLinkProbe<'a> {
    g: &'a Array2<Complex64>,
    h: &'a Array2<Complex64>,
    power_gain: f64,
    cached_w: Option<Array1<Complex64>>,
    /// `G^H w` for the cached transmit beam.
    u: Vec<Complex64>,
    cached_f: Option<Array1<Complex64>>,
    /// `H f` for the cached combiner.
    v: Vec<Complex64>,
    /// Elementwise `conj(u_m) v_m`, rebuilt when either beam changes.
    c: Vec<Complex64>,
    /// Unit phasors for each quantized phase index.
    phase_table: Vec<Complex64>,
    table_bits: Option<u8>,
    probes: u64,
}

impl<'a> CachingLinkProbe<'a> {
    /// Builds a probe over the user's two channel segments.
    /// `power_gain` is the transmit-power-to-noise ratio multiplying the
    /// channel power gain (see `LinkBudget::power_gain`).
    pub fn new(g: &'a Array2<Complex64>, h: &'a Array2<Complex64>, power_gain: f64) -> Self {
        assert_eq!(
            g.ncols(),
            h.nrows(),
            "surface element counts of the two segments must match"
        );
        let m = g.ncols();
        CachingLinkProbe {
            g,
            h,
            power_gain,
            cached_w: None,
            u: vec![Complex64::new(0.0, 0.0); m],
            cached_f: None,
            v: vec![Complex64::new(0.0, 0.0); m],
            c: vec![Complex64::new(0.0, 0.0); m],
            phase_table: Vec::new(),
            table_bits: None,
            probes: 0,
        }
    }

    /// Number of rate queries served so far.
    pub fn probes(&self) -> u64 {
        self.probes
    }

    /// Linear SNR for a candidate triple; `rate` is `log2(1 + snr_of)`.
    pub fn snr_of(
        &mut self,
        w: &Array1<Complex64>,
        f: &Array1<Complex64>,
        phi: &ReflectionConfig,
    ) -> f64 {
        let m = self.u.len();
        assert_eq!(w.len(), self.g.nrows(), "transmit beam length");
        assert_eq!(f.len(), self.h.ncols(), "combiner length");
        assert_eq!(phi.len(), m, "reflection element count");

        let mut dirty = false;
        if self.cached_w.as_ref() != Some(w) {
            for (mi, um) in self.u.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..w.len() {
                    acc += self.g[[r, mi]].conj() * w[r];
                }
                *um = acc;
            }
            self.cached_w = Some(w.clone());
            dirty = true;
        }
        if self.cached_f.as_ref() != Some(f) {
            for (mi, vm) in self.v.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for cix in 0..f.len() {
                    acc += self.h[[mi, cix]] * f[cix];
                }
                *vm = acc;
            }
            self.cached_f = Some(f.clone());
            dirty = true;
        }
        if dirty {
            for mi in 0..m {
                self.c[mi] = self.u[mi].conj() * self.v[mi];
            }
        }
        if self.table_bits != Some(phi.bits()) {
            let count = 1usize << phi.bits();
            let step = std::f64::consts::TAU / count as f64;
            self.phase_table = (0..count)
                .map(|i| Complex64::from_polar(1.0, i as f64 * step))
                .collect();
            self.table_bits = Some(phi.bits());
        }

        // The received scalar is conj of the sum below; |.|^2 is the same.
        let mut s = Complex64::new(0.0, 0.0);
        for (mi, &idx) in phi.indices().iter().enumerate() {
            s += self.c[mi] * self.phase_table[usize::from(idx)];
        }
        self.probes += 1;
        s.norm_sqr() * self.power_gain
    }
}

impl RateProbe for CachingLinkProbe<'_> {
    fn rate(
        &mut self,
        w: &Array1<Complex64>,
        f: &Array1<Complex64>,
        phi: &ReflectionConfig,
    ) -> f64 {
        crate::channel::rate(self.snr_of(w, f, phi))
    }
}
