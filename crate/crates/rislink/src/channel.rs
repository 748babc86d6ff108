//! Geometric channel model for the two-segment BS -> RIS -> user link.
//!
//! The direct BS-to-user path is blocked; the only propagation route is the
//! reflection through the surface. Both segments follow a narrowband
//! Saleh-Valenzuela model: one line-of-sight (LOS) path whose angles come
//! from the node positions, plus a fixed number of non-line-of-sight (NLOS)
//! paths with uniformly drawn angles and an extra attenuation margin.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * Coordinates are metres, `[x, y, z]`, with `z` the height above ground.
//! * Both uniform linear arrays (BS transmit, user receive) lie along the
//!   x axis, so a steering angle `psi` enters through `sin(psi)`, the x
//!   component of the propagation direction.
//! * The RIS is a uniform planar array in the y-z plane: row index along
//!   the y axis (azimuth term `sin(zeta) * sin(phi)`), column index along
//!   the z axis (elevation term `cos(zeta)`). Elements are vectorized
//!   row-major, index `i_a * cols + i_b`.
//! * Element spacing is expressed as a fraction of the carrier wavelength;
//!   every array here uses half-wavelength spacing by default.
//! * Powers are converted from dBm to milliwatts once, at configuration
//!   time; all math below is linear.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

use crate::error::ConfigError;
use crate::ris_search::ReflectionConfig;

/// Half-wavelength element spacing, as a fraction of the wavelength.
pub const HALF_WAVELENGTH: f64 = 0.5;

/// A point in metres, `[x, y, z]` with `z` the height.
pub type Point3 = [f64; 3];

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(v: Point3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Euclidean distance between two points.
pub fn distance(a: Point3, b: Point3) -> f64 {
    norm(sub(a, b))
}

fn unit_toward(from: Point3, to: Point3) -> Point3 {
    let d = sub(to, from);
    let n = norm(d);
    assert!(n > 0.0, "coincident nodes: direction is undefined");
    [d[0] / n, d[1] / n, d[2] / n]
}

/// Node placement: base station, reflecting surface, and the disc the users
/// are dropped on.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemGeometry {
    /// Base-station position (z component is the mast height).
    pub bs_position: Point3,
    /// Surface position (z component is the mounting height).
    pub ris_position: Point3,
    /// Centre of the horizontal disc users are dropped on uniformly.
    pub ue_circle_center: Point3,
    /// Radius of the user disc in metres.
    pub ue_circle_radius: f64,
}

impl SystemGeometry {
    /// Builds a geometry from ground-plane coordinates plus heights.
    pub fn new(
        bs_xy: [f64; 2],
        bs_height: f64,
        ris_xy: [f64; 2],
        ris_height: f64,
        ue_center_xy: [f64; 2],
        ue_height: f64,
        ue_radius: f64,
    ) -> Result<Self, ConfigError> {
        if !(ue_radius > 0.0) {
            return Err(ConfigError::out_of_range(
                "ue_radius",
                format!("must be > 0, got {ue_radius}"),
            ));
        }
        for (name, h) in [
            ("bs_height", bs_height),
            ("ris_height", ris_height),
            ("ue_height", ue_height),
        ] {
            if !(h > 0.0) {
                return Err(ConfigError::out_of_range(
                    name,
                    format!("must be > 0, got {h}"),
                ));
            }
        }
        let geometry = SystemGeometry {
            bs_position: [bs_xy[0], bs_xy[1], bs_height],
            ris_position: [ris_xy[0], ris_xy[1], ris_height],
            ue_circle_center: [ue_center_xy[0], ue_center_xy[1], ue_height],
            ue_circle_radius: ue_radius,
        };
        if distance(geometry.bs_position, geometry.ris_position) <= 0.0 {
            return Err(ConfigError::out_of_range(
                "ris_position",
                "must differ from the base-station position".to_string(),
            ));
        }
        Ok(geometry)
    }

    pub fn bs_height(&self) -> f64 {
        self.bs_position[2]
    }

    pub fn ris_height(&self) -> f64 {
        self.ris_position[2]
    }

    pub fn ue_height(&self) -> f64 {
        self.ue_circle_center[2]
    }
}

/// Antenna-array dimensions for all three nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    /// Transmit antennas at the base station (power of two).
    pub n_tx: usize,
    /// Receive antennas at each user (power of two).
    pub n_rx: usize,
    /// Surface rows (y axis).
    pub ris_rows: usize,
    /// Surface columns (z axis).
    pub ris_cols: usize,
    /// Element spacing as a fraction of the carrier wavelength (d / lambda).
    ///
    /// Defaults to [`HALF_WAVELENGTH`]. The hierarchical codebook's beam
    /// patterns assume half-wavelength spacing; other ratios still produce
    /// valid steering vectors but the codebook beams no longer tile sin-space
    /// evenly.
    pub element_spacing_ratio: f64,
}

impl ArrayConfig {
    pub fn new(
        n_tx: usize,
        n_rx: usize,
        ris_rows: usize,
        ris_cols: usize,
    ) -> Result<Self, ConfigError> {
        for (name, n) in [("n_tx", n_tx), ("n_rx", n_rx)] {
            if n < 2 || !n.is_power_of_two() {
                return Err(ConfigError::NotPowerOfTwo { name, value: n });
            }
        }
        for (name, n) in [("ris_rows", ris_rows), ("ris_cols", ris_cols)] {
            if n < 1 {
                return Err(ConfigError::out_of_range(name, "must be >= 1"));
            }
        }
        Ok(ArrayConfig {
            n_tx,
            n_rx,
            ris_rows,
            ris_cols,
            element_spacing_ratio: HALF_WAVELENGTH,
        })
    }

    /// Replaces the element spacing ratio (must be positive and finite).
    pub fn with_element_spacing(mut self, ratio: f64) -> Result<Self, ConfigError> {
        if !ratio.is_finite() || ratio <= 0.0 {
            return Err(ConfigError::out_of_range(
                "element_spacing_ratio",
                "must be positive and finite",
            ));
        }
        self.element_spacing_ratio = ratio;
        Ok(self)
    }

    /// Total number of surface elements.
    pub fn ris_elements(&self) -> usize {
        self.ris_rows * self.ris_cols
    }
}

/// Link-budget quantities, stored linear (milliwatts and ratios).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Transmit power in mW.
    pub tx_power_mw: f64,
    /// Noise power in mW.
    pub noise_power_mw: f64,
    /// Demodulation SNR threshold as a linear ratio.
    pub snr_threshold: f64,
    /// Pathloss intercept in dB at 1 m.
    pub pathloss_a: f64,
    /// Pathloss distance exponent (slope of `10 * b * log10(d)`).
    pub pathloss_b: f64,
    /// Standard deviation of lognormal shadowing, in dB.
    pub shadow_sigma_db: f64,
    /// Extra NLOS attenuation margin, in dB.
    pub nlos_margin_db: f64,
}

impl LinkBudget {
    /// Converts dBm/dB inputs to the linear quantities used internally.
    pub fn from_db(
        tx_power_dbm: f64,
        noise_power_dbm: f64,
        snr_threshold_db: f64,
        pathloss_a: f64,
        pathloss_b: f64,
        shadow_sigma_db: f64,
        nlos_margin_db: f64,
    ) -> Result<Self, ConfigError> {
        if shadow_sigma_db < 0.0 {
            return Err(ConfigError::out_of_range("shadow_sigma_db", "must be >= 0"));
        }
        Ok(LinkBudget {
            tx_power_mw: 10f64.powf(tx_power_dbm / 10.0),
            noise_power_mw: 10f64.powf(noise_power_dbm / 10.0),
            snr_threshold: 10f64.powf(snr_threshold_db / 10.0),
            pathloss_a,
            pathloss_b,
            shadow_sigma_db,
            nlos_margin_db,
        })
    }

    /// Transmit-power-to-noise ratio, the factor multiplying the channel
    /// power gain in the SNR.
    pub fn power_gain(&self) -> f64 {
        self.tx_power_mw / self.noise_power_mw
    }
}

/// One propagation path of a link.
///
/// Angles are radians. For the BS-to-RIS segment the departure end is the
/// BS line array (azimuth only) and the arrival end is the surface; for the
/// RIS-to-user segment the departure end is the surface and the arrival end
/// is the user's line array. Elevation angles are meaningful only at the
/// surface end; at a line-array end the elevation is held at `pi/2`
/// (broadside) and never enters the math.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathComponent {
    /// Complex small-scale gain, shadowing and pathloss included.
    pub gain: Complex64,
    /// Azimuth angle of departure.
    pub azimuth_aod: f64,
    /// Elevation angle of departure.
    pub elevation_aod: f64,
    /// Azimuth angle of arrival.
    pub azimuth_aoa: f64,
    /// Elevation angle of arrival.
    pub elevation_aoa: f64,
    /// True for the single geometric line-of-sight path.
    pub is_los: bool,
}

/// One Monte Carlo draw of every channel in the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// BS-to-surface matrix, `n_tx x m`.
    pub g: Array2<Complex64>,
    /// Surface-to-user matrices, one `m x n_rx` entry per user.
    pub h_r: Vec<Array2<Complex64>>,
    /// Paths behind `g`.
    pub paths_g: Vec<PathComponent>,
    /// Paths behind each `h_r[k]`.
    pub paths_h: Vec<Vec<PathComponent>>,
    /// Drawn user positions.
    pub ue_positions: Vec<Point3>,
}

/// Steering vector of an `n`-element uniform linear array toward angle
/// `psi`, with the given element spacing (fraction of a wavelength).
///
/// Entry `i` is `exp(j * 2*pi * spacing * i * sin(psi)) / sqrt(n)`, so the
/// vector always has unit norm.
pub fn ula_steering(n: usize, psi: f64, spacing: f64) -> Array1<Complex64> {
    assert!(n >= 1, "array must have at least one element");
    let scale = 1.0 / (n as f64).sqrt();
    let step = 2.0 * PI * spacing * psi.sin();
    Array1::from_iter((0..n).map(|i| Complex64::from_polar(scale, step * i as f64)))
}

/// Steering vector of a `rows x cols` uniform planar array toward azimuth
/// `phi` and elevation `zeta`, vectorized row-major.
///
/// Entry `(i, j)` is
/// `exp(j * 2*pi * spacing * (i * sin(zeta) * sin(phi) + j * cos(zeta))) / sqrt(rows * cols)`.
pub fn upa_steering(rows: usize, cols: usize, phi: f64, zeta: f64, spacing: f64) -> Array1<Complex64> {
    assert!(rows >= 1 && cols >= 1, "array must have at least one element");
    let m = rows * cols;
    let scale = 1.0 / (m as f64).sqrt();
    let row_step = 2.0 * PI * spacing * zeta.sin() * phi.sin();
    let col_step = 2.0 * PI * spacing * zeta.cos();
    let mut v = Array1::zeros(m);
    for i in 0..rows {
        for j in 0..cols {
            v[i * cols + j] = Complex64::from_polar(scale, row_step * i as f64 + col_step * j as f64);
        }
    }
    v
}

/// Distance-dependent attenuation in dB: `a + 10 * b * log10(d) + shadow`.
///
/// `shadow_db` is the realized lognormal shadowing term for this link.
///
/// # Panics
///
/// Panics if `distance_m` is not strictly positive; the model is undefined
/// at zero range.
pub fn pathloss_db(distance_m: f64, shadow_db: f64, budget: &LinkBudget) -> f64 {
    assert!(
        distance_m > 0.0,
        "pathloss undefined for nonpositive distance {distance_m}"
    );
    budget.pathloss_a + 10.0 * budget.pathloss_b * distance_m.log10() + shadow_db
}

/// Complex circular Gaussian draw with total variance `variance`.
fn complex_gaussian<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Azimuth/elevation pair of the unit vector pointing from `from` toward
/// `to`, in the surface's spherical convention.
fn surface_angles(from: Point3, to: Point3) -> (f64, f64) {
    let u = unit_toward(from, to);
    let zeta = u[2].clamp(-1.0, 1.0).acos();
    let phi = u[1].atan2(u[0]);
    (phi, zeta)
}

/// Line-array angle of the unit vector from `from` toward `to`: the
/// arcsine of its x component.
fn line_angle(from: Point3, to: Point3) -> f64 {
    let u = unit_toward(from, to);
    u[0].clamp(-1.0, 1.0).asin()
}

/// Draws the BS-to-surface channel and one surface-to-user channel per user.
///
/// Draw order is fixed and documented so that seeded runs are reproducible:
/// first all user positions, then the BS-to-surface link (shadowing, then
/// per-path angles and gains), then each user's link in index order. The
/// first path of every link is the geometric LOS path; the remaining
/// `p_paths - 1` (or `l_paths - 1`) paths draw their angles uniformly and
/// carry the extra NLOS margin.
pub fn draw_channel<R: Rng>(
    geometry: &SystemGeometry,
    arrays: &ArrayConfig,
    budget: &LinkBudget,
    p_paths: usize,
    l_paths: usize,
    k_ues: usize,
    rng: &mut R,
) -> ChannelRealization {
    assert!(p_paths >= 1, "p_paths must be >= 1");
    assert!(l_paths >= 1, "l_paths must be >= 1");
    assert!(k_ues >= 1, "k_ues must be >= 1");

    let m = arrays.ris_elements();

    let ue_positions: Vec<Point3> = (0..k_ues)
        .map(|_| {
            let r = geometry.ue_circle_radius * rng.gen_range(0.0..1.0f64).sqrt();
            let theta = rng.gen_range(0.0..2.0 * PI);
            [
                geometry.ue_circle_center[0] + r * theta.cos(),
                geometry.ue_circle_center[1] + r * theta.sin(),
                geometry.ue_circle_center[2],
            ]
        })
        .collect();

    // BS -> surface segment.
    let shadow_g: f64 = {
        let z: f64 = rng.sample(StandardNormal);
        z * budget.shadow_sigma_db
    };
    let d_g = distance(geometry.bs_position, geometry.ris_position);
    let kappa_g = pathloss_db(d_g, shadow_g, budget);
    let los_aod_g = line_angle(geometry.bs_position, geometry.ris_position);
    let (los_az_g, los_el_g) = surface_angles(geometry.ris_position, geometry.bs_position);
    let mut paths_g = Vec::with_capacity(p_paths);
    for i in 0..p_paths {
        let is_los = i == 0;
        let (aod, az, el) = if is_los {
            (los_aod_g, los_az_g, los_el_g)
        } else {
            let aod = rng.gen_range(-1.0..1.0f64).asin();
            let az = rng.gen_range(-PI / 2.0..PI / 2.0);
            let el = rng.gen_range(0.0..PI);
            (aod, az, el)
        };
        let extra = if is_los { 0.0 } else { budget.nlos_margin_db };
        let gain = complex_gaussian(rng, 10f64.powf(-0.1 * (kappa_g + extra)));
        paths_g.push(PathComponent {
            gain,
            azimuth_aod: aod,
            elevation_aod: PI / 2.0,
            azimuth_aoa: az,
            elevation_aoa: el,
            is_los,
        });
    }
    let spacing = arrays.element_spacing_ratio;
    let scale_g = ((arrays.n_tx * m) as f64 / p_paths as f64).sqrt();
    let mut g = Array2::zeros((arrays.n_tx, m));
    for path in &paths_g {
        let a_bs = ula_steering(arrays.n_tx, path.azimuth_aod, spacing);
        let a_ris = upa_steering(
            arrays.ris_rows,
            arrays.ris_cols,
            path.azimuth_aoa,
            path.elevation_aoa,
            spacing,
        );
        for r in 0..arrays.n_tx {
            let lhs = scale_g * path.gain * a_bs[r];
            for c in 0..m {
                g[[r, c]] += lhs * a_ris[c].conj();
            }
        }
    }

    // Surface -> user segments.
    let mut h_r = Vec::with_capacity(k_ues);
    let mut paths_h = Vec::with_capacity(k_ues);
    for pos in &ue_positions {
        let shadow: f64 = {
            let z: f64 = rng.sample(StandardNormal);
            z * budget.shadow_sigma_db
        };
        let d = distance(geometry.ris_position, *pos);
        let kappa = pathloss_db(d, shadow, budget);
        let (los_az, los_el) = surface_angles(geometry.ris_position, *pos);
        let los_aoa = line_angle(*pos, geometry.ris_position);
        let mut paths = Vec::with_capacity(l_paths);
        for i in 0..l_paths {
            let is_los = i == 0;
            let (az, el, aoa) = if is_los {
                (los_az, los_el, los_aoa)
            } else {
                let az = rng.gen_range(-PI / 2.0..PI / 2.0);
                let el = rng.gen_range(0.0..PI);
                let aoa = rng.gen_range(-1.0..1.0f64).asin();
                (az, el, aoa)
            };
            let extra = if is_los { 0.0 } else { budget.nlos_margin_db };
            let gain = complex_gaussian(rng, 10f64.powf(-0.1 * (kappa + extra)));
            paths.push(PathComponent {
                gain,
                azimuth_aod: az,
                elevation_aod: el,
                azimuth_aoa: aoa,
                elevation_aoa: PI / 2.0,
                is_los,
            });
        }
        let scale = ((m * arrays.n_rx) as f64 / l_paths as f64).sqrt();
        let mut h = Array2::zeros((m, arrays.n_rx));
        for path in &paths {
            let a_ris = upa_steering(
                arrays.ris_rows,
                arrays.ris_cols,
                path.azimuth_aod,
                path.elevation_aod,
                spacing,
            );
            let a_ue = ula_steering(arrays.n_rx, path.azimuth_aoa, spacing);
            for r in 0..m {
                let lhs = scale * path.gain * a_ris[r];
                for c in 0..arrays.n_rx {
                    h[[r, c]] += lhs * a_ue[c].conj();
                }
            }
        }
        h_r.push(h);
        paths_h.push(paths);
    }

    ChannelRealization {
        g,
        h_r,
        paths_g,
        paths_h,
        ue_positions,
    }
}

/// Cascaded channel `g * diag(exp(j*phases)) * h_r` for raw phase values.
///
/// # Panics
///
/// Panics if the inner dimensions disagree with `phases.len()`.
pub fn effective_channel_phases(
    g: &Array2<Complex64>,
    phases: &[f64],
    h_r: &Array2<Complex64>,
) -> Array2<Complex64> {
    let m = phases.len();
    assert_eq!(g.ncols(), m, "g column count must match element count");
    assert_eq!(h_r.nrows(), m, "h_r row count must match element count");
    let shifts: Vec<Complex64> = phases
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();
    let (n_tx, n_rx) = (g.nrows(), h_r.ncols());
    let mut out = Array2::zeros((n_tx, n_rx));
    for r in 0..n_tx {
        for c in 0..n_rx {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..m {
                acc += g[[r, k]] * shifts[k] * h_r[[k, c]];
            }
            out[[r, c]] = acc;
        }
    }
    out
}

/// Cascaded channel for a quantized reflection configuration.
pub fn effective_channel(
    g: &Array2<Complex64>,
    phi: &ReflectionConfig,
    h_r: &Array2<Complex64>,
) -> Array2<Complex64> {
    effective_channel_phases(g, &phi.phases(), h_r)
}

/// Post-combining SNR for transmit beam `w`, receive combiner `f`, and the
/// cascaded channel `h_eff` (`n_tx x n_rx`), as a linear ratio.
pub fn snr(
    f: &Array1<Complex64>,
    w: &Array1<Complex64>,
    h_eff: &Array2<Complex64>,
    budget: &LinkBudget,
) -> f64 {
    assert_eq!(h_eff.nrows(), w.len(), "w length must match h_eff rows");
    assert_eq!(h_eff.ncols(), f.len(), "f length must match h_eff cols");
    let mut s = Complex64::new(0.0, 0.0);
    for c in 0..f.len() {
        let mut inner = Complex64::new(0.0, 0.0);
        for r in 0..w.len() {
            inner += h_eff[[r, c]].conj() * w[r];
        }
        s += f[c].conj() * inner;
    }
    s.norm_sqr() * budget.power_gain()
}

/// Achievable spectral efficiency in bit/s/Hz for a linear SNR.
pub fn rate(snr: f64) -> f64 {
    (1.0 + snr).log2()
}
