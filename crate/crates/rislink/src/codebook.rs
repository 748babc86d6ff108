//! Binary-tree hierarchical beam codebook for an `n`-element uniform
//! linear array at half-wavelength spacing.
//!
//! Layer `l` holds `2^l` codewords that tile the sine of the steering angle
//! (the interval `[-1, 1]`) into `2^l` equal cells; codeword `(l, i)`
//! nominally covers `[-1 + 2*(i-1)/2^l, -1 + 2*i/2^l]`. The bottom layer
//! (`log2(n)`) consists of plain steering vectors on the `n`-point grid.
//! Wider beams are synthesized by splitting the array into sub-arrays,
//! steering each sub-array, and deactivating half of them when the target
//! width calls for it; codeword `(l, i)` for `i > 1` is the first codeword
//! of its layer rotated by `2*(i-1)/2^l` in sine space.
//!
//! Codeword indexing is 1-based inside each layer so that the tree
//! arithmetic stays clean: the children of `(l, i)` are `(l+1, 2i-1)` and
//! `(l+1, 2i)`.

use ndarray::Array1;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::{self, Write};

use crate::error::ConfigError;
use crate::report::format_sig;

/// Steering vector parameterized directly by sine-space coordinate `x`,
/// entry `i` being `exp(j*pi*i*x) / sqrt(n)`. Values of `x` outside
/// `[-1, 1]` are meaningful here (the rotation step uses them); the
/// pattern is 2-periodic in `x`.
fn steering_sin(n: usize, x: f64) -> Array1<Complex64> {
    let scale = 1.0 / (n as f64).sqrt();
    Array1::from_iter((0..n).map(|i| Complex64::from_polar(scale, PI * i as f64 * x)))
}

/// Beam amplitude gain of codeword `w` toward sine-space coordinate `x`:
/// `|sum_i w_i * exp(-j*pi*i*x)|`. A steering vector evaluated at its own
/// coordinate scores `sqrt(n)`.
pub fn beam_gain_sin(w: &Array1<Complex64>, x: f64) -> f64 {
    let s: Complex64 = w
        .iter()
        .enumerate()
        .map(|(i, &wi)| wi * Complex64::from_polar(1.0, -PI * i as f64 * x))
        .sum();
    s.norm()
}

/// Beam amplitude gain toward physical angle `psi` (radians).
pub fn beam_gain(w: &Array1<Complex64>, psi: f64) -> f64 {
    beam_gain_sin(w, psi.sin())
}

/// Hierarchical codebook: `log2(n) + 1` layers, layer `l` holding `2^l`
/// unit-norm codewords of length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalCodebook {
    n: usize,
    layers: Vec<Vec<Array1<Complex64>>>,
}

impl HierarchicalCodebook {
    /// Array size the codebook was built for.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of layers, `log2(n) + 1`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Index of the bottom (steering-vector) layer.
    pub fn last_layer(&self) -> usize {
        self.layers.len() - 1
    }

    /// All codewords of one layer, in index order.
    pub fn layer(&self, layer: usize) -> &[Array1<Complex64>] {
        &self.layers[layer]
    }

    /// Codeword `(layer, idx)` with `idx` 1-based within the layer.
    ///
    /// # Panics
    ///
    /// Panics if `layer` or `idx` is out of range.
    pub fn codeword(&self, layer: usize, idx: usize) -> &Array1<Complex64> {
        assert!(layer < self.layers.len(), "layer {layer} out of range");
        assert!(
            (1..=self.layers[layer].len()).contains(&idx),
            "codeword index {idx} out of range for layer {layer}"
        );
        &self.layers[layer][idx - 1]
    }

    /// The two children of codeword `(layer, idx)` in the next layer.
    ///
    /// # Panics
    ///
    /// Panics if `(layer, idx)` is out of range or already on the bottom
    /// layer.
    pub fn children(&self, layer: usize, idx: usize) -> (usize, usize) {
        assert!(layer < self.last_layer(), "bottom layer has no children");
        assert!(
            (1..=self.layers[layer].len()).contains(&idx),
            "codeword index {idx} out of range for layer {layer}"
        );
        (2 * idx - 1, 2 * idx)
    }

    /// One CSV row per codeword: `layer,index` followed by interleaved
    /// real/imaginary entries.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (layer, codewords) in self.layers.iter().enumerate() {
            for (i, w) in codewords.iter().enumerate() {
                write!(out, "{layer},{}", i + 1)?;
                for z in w.iter() {
                    write!(out, ",{},{}", format_sig(z.re), format_sig(z.im))?;
                }
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Builds the codebook for an `n`-element array; `n` must be a power of
/// two, at least 2.
pub fn build_codebook(n: usize) -> Result<HierarchicalCodebook, ConfigError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(ConfigError::NotPowerOfTwo {
            name: "codebook n",
            value: n,
        });
    }
    let depth = n.trailing_zeros() as usize;
    let mut layers = Vec::with_capacity(depth + 1);
    for l in 0..=depth {
        let count = 1usize << l;
        let base = if l == depth {
            None
        } else {
            Some(wide_base_codeword(n, depth - l))
        };
        let mut layer = Vec::with_capacity(count);
        for idx in 1..=count {
            let mut w = match &base {
                // Bottom layer: steering vector at the cell centre of the
                // n-point grid.
                None => steering_sin(n, -1.0 + (2.0 * idx as f64 - 1.0) / n as f64),
                Some(base) => {
                    if idx == 1 {
                        base.clone()
                    } else {
                        // Rotate the layer's first codeword in sine space.
                        let shift = 2.0 * (idx as f64 - 1.0) / count as f64;
                        let mut w = base.clone();
                        for (i, z) in w.iter_mut().enumerate() {
                            *z *= Complex64::from_polar(1.0, PI * i as f64 * shift);
                        }
                        w
                    }
                }
            };
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            w.mapv_inplace(|z| z / norm);
            layer.push(w);
        }
        layers.push(layer);
    }
    Ok(HierarchicalCodebook { n, layers })
}

/// First codeword of a non-bottom layer, whose beam must span `2^p` bottom
/// cells: split the array into `q = 2^ceil(p/2)` sub-arrays of `n/q`
/// elements, steer the first `n_active` of them to staggered directions
/// with a per-sub-array phase offset, and deactivate the rest.
fn wide_base_codeword(n: usize, p: usize) -> Array1<Complex64> {
    let q = 1usize << p.div_ceil(2);
    let sub = n / q;
    let n_active = if p % 2 == 1 { q / 2 } else { q };
    let mut w = Array1::zeros(n);
    for qi in 1..=n_active {
        let offset = Complex64::from_polar(1.0, -(qi as f64) * (sub as f64 - 1.0) / sub as f64 * PI);
        let seg = steering_sin(sub, -1.0 + (2.0 * qi as f64 - 1.0) / sub as f64);
        for i in 0..sub {
            w[(qi - 1) * sub + i] = offset * seg[i];
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: Complex64, expected: Complex64, tol: f64) {
        assert!(
            (actual - expected).norm() < tol,
            "got {actual}, expected {expected}"
        );
    }

    #[test]
    fn two_element_codebook_layers() {
        let cb = build_codebook(2).unwrap();
        assert_eq!(cb.depth(), 2);
        // Root: single-sub-array deactivation pattern, one live element.
        let root = cb.codeword(0, 1);
        assert_close(root[0], Complex64::new(1.0, 0.0), 1e-12);
        assert_close(root[1], Complex64::new(0.0, 0.0), 1e-12);
        // Bottom layer: steering vectors at sine coordinates -1/2 and 1/2.
        for (idx, x) in [(1usize, -0.5f64), (2, 0.5)] {
            let expected = steering_sin(2, x);
            let got = cb.codeword(1, idx);
            for i in 0..2 {
                assert_close(got[i], expected[i], 1e-12);
            }
        }
    }

    #[test]
    fn four_element_middle_layer_values() {
        // Hand-evaluated deactivation construction: half the array live,
        // first sub-array steered to -1/2 with offset -pi/2.
        let cb = build_codebook(4).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let w11 = cb.codeword(1, 1);
        assert_close(w11[0], Complex64::new(0.0, -s), 1e-12);
        assert_close(w11[1], Complex64::new(-s, 0.0), 1e-12);
        assert_close(w11[2], Complex64::new(0.0, 0.0), 1e-12);
        assert_close(w11[3], Complex64::new(0.0, 0.0), 1e-12);
        let w12 = cb.codeword(1, 2);
        assert_close(w12[0], Complex64::new(0.0, -s), 1e-12);
        assert_close(w12[1], Complex64::new(s, 0.0), 1e-12);
        assert_close(w12[2], Complex64::new(0.0, 0.0), 1e-12);
        assert_close(w12[3], Complex64::new(0.0, 0.0), 1e-12);
    }

    #[test]
    fn layer_counts_double() {
        let cb = build_codebook(16).unwrap();
        assert_eq!(cb.depth(), 5);
        for l in 0..5 {
            assert_eq!(cb.layer(l).len(), 1 << l);
        }
    }

    #[test]
    fn all_codewords_have_unit_norm() {
        for n in [2usize, 4, 8, 16, 64] {
            let cb = build_codebook(n).unwrap();
            for l in 0..cb.depth() {
                for w in cb.layer(l) {
                    let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum();
                    assert!(
                        (norm - 1.0).abs() < 1e-12,
                        "norm {norm} at layer {l} for n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(build_codebook(0).is_err());
        assert!(build_codebook(1).is_err());
        assert!(build_codebook(3).is_err());
        assert!(build_codebook(12).is_err());
    }

    #[test]
    fn children_arithmetic() {
        let cb = build_codebook(16).unwrap();
        assert_eq!(cb.children(0, 1), (1, 2));
        assert_eq!(cb.children(2, 3), (5, 6));
        assert_eq!(cb.children(3, 8), (15, 16));
    }

    #[test]
    #[should_panic(expected = "bottom layer has no children")]
    fn bottom_layer_children_panic() {
        let cb = build_codebook(4).unwrap();
        cb.children(2, 1);
    }

    #[test]
    fn steering_codeword_peaks_at_sqrt_n() {
        let n = 8;
        let psi = 0.4f64;
        let w = steering_sin(n, psi.sin());
        assert!((beam_gain(&w, psi) - (n as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn beam_gain_null_and_zero_vector() {
        // Two-element broadside beam has a null at endfire.
        let w = steering_sin(2, 0.0);
        assert!(beam_gain(&w, PI / 2.0) < 1e-12);
        let zero = Array1::from_elem(2, Complex64::new(0.0, 0.0));
        assert_eq!(beam_gain(&zero, 0.3), 0.0);
    }

    /// Gain profile sampled on a uniform sine-space grid.
    fn gain_profile(w: &Array1<Complex64>, grid: usize) -> Vec<f64> {
        (0..grid)
            .map(|t| beam_gain_sin(w, -1.0 + 2.0 * t as f64 / grid as f64))
            .collect()
    }

    #[test]
    fn rotation_shifts_the_gain_profile() {
        // Property: codeword (l, i) is codeword (l, 1) rotated by
        // 2*(i-1)/2^l in sine space, so on a 2^k-point grid the profiles
        // are exact circular shifts of each other.
        let grid = 512usize;
        let cb = build_codebook(16).unwrap();
        for l in 1..cb.depth() {
            let reference = gain_profile(cb.codeword(l, 1), grid);
            for idx in 2..=(1usize << l) {
                let shift = grid * (idx - 1) / (1usize << l);
                let rotated = gain_profile(cb.codeword(l, idx), grid);
                for t in 0..grid {
                    let expected = reference[(t + grid - shift) % grid];
                    assert!(
                        (rotated[t] - expected).abs() < 1e-9,
                        "layer {l} idx {idx} grid point {t}: {} vs {expected}",
                        rotated[t]
                    );
                }
            }
        }
    }

    #[test]
    fn every_layer_covers_all_directions() {
        // Tiling property: past the root, no sine-space grid point falls
        // below a quarter of the layer's median peak gain, so the rotated
        // copies cover [-1, 1] without gaps. Leaf layers cross over near
        // the classic 2 / pi of the peak. The root is a single wide beam
        // with an exact null at sin = +-1 (a known artifact of the
        // deactivation construction); it has no sibling and is never
        // probed during descent, so it only needs to cover the interior.
        let grid = 512usize;
        for n in [16usize, 64] {
            let cb = build_codebook(n).unwrap();
            for l in 0..cb.depth() {
                let profiles: Vec<Vec<f64>> =
                    cb.layer(l).iter().map(|w| gain_profile(w, grid)).collect();
                let mut peaks: Vec<f64> = profiles
                    .iter()
                    .map(|p| p.iter().cloned().fold(0.0, f64::max))
                    .collect();
                peaks.sort_by(f64::total_cmp);
                let median_peak = peaks[peaks.len() / 2];
                let (floor, margin) = if l == 0 {
                    (0.2 * median_peak, 2.0 / n as f64)
                } else {
                    (0.25 * median_peak, 0.0)
                };
                for t in 0..grid {
                    let x = -1.0 + 2.0 * t as f64 / (grid - 1) as f64;
                    if x.abs() > 1.0 - margin {
                        continue;
                    }
                    let best = profiles.iter().map(|p| p[t]).fold(0.0, f64::max);
                    assert!(
                        best >= floor,
                        "n={n} layer {l} grid point {t}: best {best} < floor {floor}"
                    );
                }
            }
        }
    }

    #[test]
    fn child_peaks_stay_inside_the_parent_cell() {
        // Property: each child's strongest direction lies in its parent's
        // nominal coverage cell.
        let grid = 1024usize;
        let cb = build_codebook(16).unwrap();
        let step = 2.0 / grid as f64;
        for l in 0..cb.last_layer() {
            for idx in 1..=(1usize << l) {
                let lo = -1.0 + 2.0 * (idx as f64 - 1.0) / (1u32 << l) as f64;
                let hi = -1.0 + 2.0 * idx as f64 / (1u32 << l) as f64;
                let (c1, c2) = cb.children(l, idx);
                for child in [c1, c2] {
                    let profile = gain_profile(cb.codeword(l + 1, child), grid);
                    let argmax = profile
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1.total_cmp(b.1))
                        .map(|(t, _)| -1.0 + 2.0 * t as f64 / grid as f64)
                        .unwrap();
                    assert!(
                        argmax >= lo - step && argmax <= hi + step,
                        "layer {l} parent {idx} child {child}: peak at {argmax} outside [{lo}, {hi}]"
                    );
                }
            }
        }
    }

    #[test]
    fn csv_dump_has_one_row_per_codeword() {
        let cb = build_codebook(8).unwrap();
        let mut buf = Vec::new();
        cb.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 2 + 4 + 8);
        assert!(lines[0].starts_with("0,1,"));
        // layer, index, then 8 interleaved re/im pairs.
        assert_eq!(lines[0].split(',').count(), 2 + 16);
    }
}
