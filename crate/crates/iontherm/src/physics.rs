//! Exact forward model for blue-sideband spectroscopy of a single trapped
//! ion.
//!
//! A two-level ion in a harmonic well driven on the q-th blue sideband
//! couples `|down, n>` to `|up, n+q>` with Rabi frequency `Omega * k_{n+q,n}`,
//! where the dimensionless coupling coefficient is
//!
//! ```text
//! k_{n+q,n} = exp(-eta^2/2) * eta^q * sqrt(n!/(n+q)!) * L_n^q(eta^2)
//! ```
//!
//! with `L_n^q` the generalized Laguerre polynomial and `eta` the Lamb-Dicke
//! parameter. For a phonon distribution `p_n`, the excited-state population
//! after a resonant pulse of area `Omega*t` is
//!
//! ```text
//! P_up(q) = sum_n p_n sin^2(k_{n+q,n} * Omega*t)
//! ```
//!
//! The relaxation factor `exp(-gamma_n t)` that would multiply each term is
//! omitted throughout: the pulses in question are far shorter than the
//! excited-state lifetime, so `gamma_n` never enters numerically and no value
//! is shipped for it.
//!
//! Everything here is a pure function of its inputs; the returned tables and
//! distributions are immutable and safe to share across threads.
//!
//! # Numerical strategy
//!
//! Raw `L_n^q` values and raw factorial ratios each leave the f64 range long
//! before n reaches the few thousand phonons a hot thermal state needs, so
//! the three-term Laguerre recurrence is carried directly on the pre-scaled
//! coefficient `c_n = k_{n+q,n}`, which is bounded by 1:
//!
//! ```text
//! c_0 = exp(-x/2) eta^q / sqrt(q!)
//! c_1 = c_0 (1 + q - x) / sqrt(q+1)
//! c_{n+1} = [ (2n+q+1-x) sqrt((n+1)/(n+q+1)) c_n
//!             - sqrt(n(n+1)(n+q)/(n+q+1)) c_{n-1} ] / (n+1),   x = eta^2
//! ```

use crate::error::{Error, Result};

/// Reduced Planck constant, J*s.
pub const HBAR: f64 = 1.054571817e-34;

/// Mass of a calcium-40 ion (40 u), kg. Shipped for convenience; any ion
/// mass can be supplied through [`ExperimentGeometry`].
pub const CA40_ION_MASS: f64 = 6.642e-26;

/// Largest phonon index accepted by the coupling and Laguerre recurrences.
pub const MAX_PHONON_INDEX: usize = 20_000;

/// Largest sideband order accepted.
pub const MAX_SIDEBAND_ORDER: usize = 64;

/// Largest mean phonon number accepted by [`thermal_pmf`].
pub const MAX_NBAR: f64 = 2000.0;

/// Trap-frequency sanity window, rad/s.
pub const TRAP_FREQ_MIN: f64 = 2.0 * std::f64::consts::PI * 10.0e3;
pub const TRAP_FREQ_MAX: f64 = 2.0 * std::f64::consts::PI * 100.0e6;

/// Pulse-area sanity window for population sums, rad.
pub const MAX_PULSE_AREA: f64 = 4.0 * std::f64::consts::PI;

/// Trap and laser parameters that fix the Lamb-Dicke parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentGeometry {
    /// Ion mass, kg.
    pub ion_mass: f64,
    /// Laser wavenumber `2*pi/lambda`, rad/m.
    pub wavenumber: f64,
    /// Angle between the wave vector and the vibration axis, rad, in
    /// `[0, pi/2]`.
    pub angle: f64,
    /// Angular trap frequency `omega_z`, rad/s.
    pub trap_frequency: f64,
}

impl ExperimentGeometry {
    /// Geometry for a calcium-40 ion addressed by a laser of the given
    /// wavelength (m).
    pub fn ca40(wavelength: f64, angle: f64, trap_frequency: f64) -> Self {
        ExperimentGeometry {
            ion_mass: CA40_ION_MASS,
            wavenumber: 2.0 * std::f64::consts::PI / wavelength,
            angle,
            trap_frequency,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.ion_mass > 0.0) || !self.ion_mass.is_finite() {
            return Err(Error::InvalidInput(format!(
                "ion mass must be positive, got {}",
                self.ion_mass
            )));
        }
        if !(self.wavenumber > 0.0) || !self.wavenumber.is_finite() {
            return Err(Error::InvalidInput(format!(
                "wavenumber must be positive, got {}",
                self.wavenumber
            )));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.angle) {
            return Err(Error::InvalidInput(format!(
                "angle must lie in [0, pi/2], got {}",
                self.angle
            )));
        }
        if !(TRAP_FREQ_MIN..=TRAP_FREQ_MAX).contains(&self.trap_frequency) {
            return Err(Error::InvalidInput(format!(
                "trap frequency {:.3e} rad/s outside sanity window [{:.3e}, {:.3e}]",
                self.trap_frequency, TRAP_FREQ_MIN, TRAP_FREQ_MAX
            )));
        }
        Ok(())
    }
}

/// Scaled coupling coefficients `k_{n+q,n}` for one sideband order, n = 0..=n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    /// Lamb-Dicke parameter the table was built for.
    pub eta: f64,
    /// Sideband order q >= 1.
    pub q: usize,
    /// `values[n] = k_{n+q,n}`; every entry bounded by 1 (plus f64 slack).
    pub values: Vec<f64>,
}

impl CouplingTable {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// Truncated, renormalized thermal phonon-number distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalDistribution {
    /// Mean phonon number the law was built for.
    pub nbar: f64,
    /// `probs[m]` for m = 0..=n_max; sums to 1 after renormalization.
    pub probs: Vec<f64>,
    /// Requested untruncated tail mass.
    pub tail_epsilon: f64,
}

impl ThermalDistribution {
    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// Wraps an explicit phonon distribution (for example a pure Fock
    /// ground state `[1.0]`). Probabilities must be non-negative and sum to
    /// 1 within 1e-9; they are renormalized exactly.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput("empty probability vector".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidInput(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let total = kahan_sum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        let mut probs = probs;
        for p in &mut probs {
            *p /= total;
        }
        let nbar = probs
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .sum::<f64>();
        Ok(ThermalDistribution {
            nbar,
            probs,
            tail_epsilon: 0.0,
        })
    }
}

/// A spectrum record: the Lamb-Dicke parameter plus `P_up(1..=Q)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SidebandSpectrum {
    pub eta: f64,
    /// `populations[q-1] = P_up(q)`.
    pub populations: Vec<f64>,
}

impl SidebandSpectrum {
    pub fn q(&self) -> usize {
        self.populations.len()
    }
}

/// Lamb-Dicke parameter `cos(theta) * k * sqrt(hbar / (2 m omega_z))`.
pub fn lamb_dicke(geometry: &ExperimentGeometry) -> Result<f64> {
    geometry.validate()?;
    let eta = geometry.angle.cos()
        * geometry.wavenumber
        * (HBAR / (2.0 * geometry.ion_mass * geometry.trap_frequency)).sqrt();
    if eta >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "geometry yields eta = {eta:.4}, outside the Lamb-Dicke regime"
        )));
    }
    Ok(eta)
}

/// Generalized Laguerre polynomial `L_n^alpha(x)` by the three-term
/// recurrence in n.
pub fn laguerre(n: usize, alpha: usize, x: f64) -> Result<f64> {
    laguerre_capped(n, alpha, x, MAX_PHONON_INDEX)
}

/// [`laguerre`] with an explicit degree cap.
pub fn laguerre_capped(n: usize, alpha: usize, x: f64, cap: usize) -> Result<f64> {
    if n > cap {
        return Err(Error::ResourceLimit(format!(
            "Laguerre degree {n} exceeds cap {cap}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "Laguerre argument must be non-negative, got {x}"
        )));
    }
    let a = alpha as f64;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + a + 1.0 - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn check_coupling_args(q: usize, eta: f64, n_max: usize) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidInput("sideband order q must be >= 1".into()));
    }
    if q > MAX_SIDEBAND_ORDER {
        return Err(Error::ResourceLimit(format!(
            "sideband order {q} exceeds cap {MAX_SIDEBAND_ORDER}"
        )));
    }
    if n_max > MAX_PHONON_INDEX {
        return Err(Error::ResourceLimit(format!(
            "phonon index {n_max} exceeds cap {MAX_PHONON_INDEX}"
        )));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidInput(format!(
            "eta must lie in (0, 1), got {eta}"
        )));
    }
    Ok(())
}

/// Fills `out` with `k_{n+q,n}` for n = 0..=n_max using the scaled
/// recurrence; a single forward pass, no intermediate leaves `[-1, 1]` by
/// more than rounding.
fn fill_scaled_couplings(eta: f64, q: usize, n_max: usize, out: &mut Vec<f64>) {
    let x = eta * eta;
    let qf = q as f64;

    let mut c0 = (-x / 2.0).exp() * eta.powi(q as i32);
    for i in 1..=q {
        c0 /= (i as f64).sqrt();
    }
    out.push(c0);
    if n_max == 0 {
        return;
    }

    let c1 = c0 * (1.0 + qf - x) / (qf + 1.0).sqrt();
    out.push(c1);
    let (mut prev, mut cur) = (c0, c1);
    for n in 1..n_max {
        let nf = n as f64;
        let a = (2.0 * nf + qf + 1.0 - x) * ((nf + 1.0) / (nf + qf + 1.0)).sqrt();
        let b = (nf * (nf + 1.0) * (nf + qf) / (nf + qf + 1.0)).sqrt();
        let next = (a * cur - b * prev) / (nf + 1.0);
        out.push(next);
        prev = cur;
        cur = next;
    }
}

/// Single coupling coefficient `k_{n+q,n}`.
pub fn coupling_ratio(n: usize, q: usize, eta: f64) -> Result<f64> {
    check_coupling_args(q, eta, n)?;
    let mut values = Vec::with_capacity(n + 1);
    fill_scaled_couplings(eta, q, n, &mut values);
    Ok(values[n])
}

/// Coupling coefficients for all n = 0..=n_max at once.
pub fn coupling_table(eta: f64, q: usize, n_max: usize) -> Result<CouplingTable> {
    check_coupling_args(q, eta, n_max)?;
    let mut values = Vec::with_capacity(n_max + 1);
    fill_scaled_couplings(eta, q, n_max, &mut values);
    debug_assert!(values.iter().all(|v| v.abs() <= 1.0 + 1e-9));
    Ok(CouplingTable { eta, q, values })
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Truncated, renormalized thermal distribution
/// `p_m = nbar^m / (nbar+1)^(m+1)`.
///
/// `n_max` is the smallest integer whose untruncated tail mass
/// `(nbar/(nbar+1))^(n_max+1)` falls below `tail_epsilon`; the kept
/// probabilities are then renormalized to sum to 1.
pub fn thermal_pmf(nbar: f64, tail_epsilon: f64) -> Result<ThermalDistribution> {
    if !(nbar > 0.0 && nbar <= MAX_NBAR) {
        return Err(Error::InvalidInput(format!(
            "nbar must lie in (0, {MAX_NBAR}], got {nbar}"
        )));
    }
    if !(tail_epsilon > 0.0 && tail_epsilon <= 0.1) {
        return Err(Error::InvalidInput(format!(
            "tail_epsilon must lie in (0, 0.1], got {tail_epsilon}"
        )));
    }

    let r = nbar / (nbar + 1.0);
    // Estimate, then pin down the exact minimal n_max in f64 arithmetic.
    let estimate = (tail_epsilon.ln() / r.ln()).ceil();
    let mut n_max = if estimate.is_finite() && estimate > 1.0 {
        estimate as usize - 1
    } else {
        0
    };
    while r.powi(n_max as i32 + 1) >= tail_epsilon {
        n_max += 1;
    }
    while n_max > 0 && r.powi(n_max as i32) < tail_epsilon {
        n_max -= 1;
    }

    let mut probs = Vec::with_capacity(n_max + 1);
    let mut p = 1.0 / (nbar + 1.0);
    for _ in 0..=n_max {
        probs.push(p);
        p *= r;
    }
    let total = kahan_sum(probs.iter().copied());
    for p in &mut probs {
        *p /= total;
    }
    Ok(ThermalDistribution {
        nbar,
        probs,
        tail_epsilon,
    })
}

/// Excited-state population `sum_n p_n sin^2(k_{n+q,n} * omega_t)`.
///
/// The table must cover at least the distribution's support. `omega_t` may
/// be negative (the population is even in the pulse area); its magnitude is
/// capped at [`MAX_PULSE_AREA`].
pub fn sideband_population(
    dist: &ThermalDistribution,
    table: &CouplingTable,
    omega_t: f64,
) -> Result<f64> {
    if table.values.len() < dist.probs.len() {
        return Err(Error::InvalidInput(format!(
            "coupling table covers n <= {}, distribution needs n <= {}",
            table.n_max(),
            dist.n_max()
        )));
    }
    if !omega_t.is_finite() || omega_t.abs() > MAX_PULSE_AREA {
        return Err(Error::InvalidInput(format!(
            "pulse area {omega_t} outside sanity window [-4pi, 4pi]"
        )));
    }
    let total = kahan_sum(
        dist.probs
            .iter()
            .zip(&table.values)
            .map(|(p, c)| {
                let s = (c * omega_t).sin();
                p * s * s
            }),
    );
    Ok(total.min(1.0))
}

/// The full observable record: `P_up(q)` for q = 1..=q_count at one
/// parameter point. Composes [`thermal_pmf`], [`coupling_table`], and
/// [`sideband_population`].
pub fn spectrum(
    nbar: f64,
    eta: f64,
    omega_t: f64,
    q_count: usize,
    tail_epsilon: f64,
) -> Result<SidebandSpectrum> {
    if q_count == 0 {
        return Err(Error::InvalidInput("need at least one sideband".into()));
    }
    let dist = thermal_pmf(nbar, tail_epsilon)?;
    let mut populations = Vec::with_capacity(q_count);
    for q in 1..=q_count {
        let table = coupling_table(eta, q, dist.n_max())?;
        populations.push(sideband_population(&dist, &table, omega_t)?);
    }
    Ok(SidebandSpectrum { eta, populations })
}
