//! TDMA scheduling under per-user age-of-information (AoI) constraints.
//!
//! Exactly one user transmits per slot. A user's AoI starts at 1 and
//! resets to 1 in any slot where it is scheduled and its SNR clears the
//! demodulation threshold; otherwise it grows by one. The design goal is
//! maximum sum rate subject to each user's time-averaged AoI staying
//! within its limit.
//!
//! The heuristic works in two phases: Phase I serves the demodulable
//! users round-robin in descending-rate order, which keeps every average
//! AoI small; Phase II greedily hands slots to the highest-rate user
//! wherever the displaced user's AoI limit survives the swap. A
//! brute-force enumerator over all assignments serves as the optimality
//! and feasibility reference on small instances.
//!
//! Users below the demodulation threshold contribute zero rate and are
//! never scheduled; their AoI limits are reported as violated rather than
//! treated as fatal.

use ndarray::Array2;

use crate::error::ScheduleError;

/// Largest number of assignments [`brute_force_schedule`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Per-user link quality feeding the scheduler.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    rates: Vec<f64>,
    demodulable: Vec<bool>,
}

impl RateProfile {
    /// # Panics
    ///
    /// Panics if the vectors differ in length or are empty.
    pub fn new(rates: Vec<f64>, demodulable: Vec<bool>) -> Self {
        assert_eq!(rates.len(), demodulable.len(), "per-user vectors disagree");
        assert!(!rates.is_empty(), "at least one user required");
        RateProfile { rates, demodulable }
    }

    /// Number of users.
    pub fn k_ues(&self) -> usize {
        self.rates.len()
    }

    /// Rate used by the scheduler: zero when the user cannot demodulate.
    pub fn effective_rate(&self, k: usize) -> f64 {
        if self.demodulable[k] {
            self.rates[k]
        } else {
            0.0
        }
    }

    pub fn is_demodulable(&self, k: usize) -> bool {
        self.demodulable[k]
    }

    /// Indices of demodulable users, ascending.
    pub fn demodulable_set(&self) -> Vec<usize> {
        (0..self.k_ues()).filter(|&k| self.demodulable[k]).collect()
    }

    /// Demodulable users sorted by descending rate, ties toward the lower
    /// index.
    pub fn by_descending_rate(&self) -> Vec<usize> {
        let mut order = self.demodulable_set();
        order.sort_by(|&a, &b| self.rates[b].total_cmp(&self.rates[a]).then(a.cmp(&b)));
        order
    }
}

/// A complete TDMA schedule: one user per slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleMatrix {
    scheduled_ue: Vec<usize>,
    k_ues: usize,
}

impl ScheduleMatrix {
    /// # Panics
    ///
    /// Panics if any slot references a user outside `0..k_ues` or the
    /// slot list is empty.
    pub fn new(scheduled_ue: Vec<usize>, k_ues: usize) -> Self {
        assert!(!scheduled_ue.is_empty(), "at least one slot required");
        assert!(
            scheduled_ue.iter().all(|&k| k < k_ues),
            "slot assignment references an unknown user"
        );
        ScheduleMatrix { scheduled_ue, k_ues }
    }

    /// Number of slots.
    pub fn t_slots(&self) -> usize {
        self.scheduled_ue.len()
    }

    /// Number of users.
    pub fn k_ues(&self) -> usize {
        self.k_ues
    }

    /// User scheduled in slot `t` (0-based).
    pub fn scheduled_ue(&self, t: usize) -> usize {
        self.scheduled_ue[t]
    }

    /// Per-slot assignment, slot order.
    pub fn assignment(&self) -> &[usize] {
        &self.scheduled_ue
    }

    /// True if user `k` holds slot `t`.
    pub fn is_scheduled(&self, k: usize, t: usize) -> bool {
        self.scheduled_ue[t] == k
    }

    /// Dense binary user-by-slot matrix; every column has exactly one 1.
    pub fn to_dense(&self) -> Array2<u8> {
        let mut u = Array2::zeros((self.k_ues, self.t_slots()));
        for (t, &k) in self.scheduled_ue.iter().enumerate() {
            u[[k, t]] = 1;
        }
        u
    }

    /// Sum rate of the schedule under a rate profile.
    pub fn sum_rate(&self, profile: &RateProfile) -> f64 {
        self.scheduled_ue
            .iter()
            .map(|&k| profile.effective_rate(k))
            .sum()
    }
}

/// AoI recursion for one slot: reset on a successfully demodulated
/// scheduled slot, grow by one otherwise.
pub fn aoi_step(previous: u32, scheduled: bool, demodulable: bool) -> u32 {
    if scheduled && demodulable {
        1
    } else {
        previous + 1
    }
}

/// Full AoI trace over the slots where `scheduled[t]` marks the user's
/// slots; the age before the first slot is 1.
pub fn aoi_trace(scheduled: &[bool], demodulable: bool) -> Vec<u32> {
    let mut age = 1u32;
    scheduled
        .iter()
        .map(|&s| {
            age = aoi_step(age, s, demodulable);
            age
        })
        .collect()
}

/// Time-averaged AoI of a trace.
///
/// # Panics
///
/// Panics on an empty trace.
pub fn average_aoi(trace: &[u32]) -> f64 {
    assert!(!trace.is_empty(), "AoI trace must cover at least one slot");
    trace.iter().map(|&a| f64::from(a)).sum::<f64>() / trace.len() as f64
}

fn user_trace(assignment: &[usize], k: usize, demodulable: bool) -> Vec<u32> {
    let scheduled: Vec<bool> = assignment.iter().map(|&u| u == k).collect();
    aoi_trace(&scheduled, demodulable)
}

/// Phase I: descending-rate round-robin over the demodulable users.
pub fn phase_one_schedule(
    profile: &RateProfile,
    t_slots: usize,
) -> Result<ScheduleMatrix, ScheduleError> {
    assert!(t_slots >= 1, "horizon must cover at least one slot");
    let order = profile.by_descending_rate();
    if order.is_empty() {
        return Err(ScheduleError::EmptyDemodulableSet);
    }
    let assignment: Vec<usize> = (0..t_slots).map(|t| order[t % order.len()]).collect();
    Ok(ScheduleMatrix::new(assignment, profile.k_ues()))
}

/// Two-phase heuristic: Phase I round-robin, then Phase II greedy slot
/// grabbing by the highest-rate user.
///
/// Phase II walks the slots in order; at each slot held by another user it
/// tentatively reassigns the slot to the top user and recomputes the
/// displaced user's whole AoI trace, keeping the swap only if that user's
/// average stays within its limit. AoI limits of users outside the
/// demodulable set are not enforced here; [`validate_schedule`] reports
/// them.
pub fn design_schedule(
    profile: &RateProfile,
    t_slots: usize,
    a_max: &[f64],
) -> Result<ScheduleMatrix, ScheduleError> {
    assert_eq!(a_max.len(), profile.k_ues(), "per-user limit count");
    let phase_one = phase_one_schedule(profile, t_slots)?;
    let mut assignment = phase_one.assignment().to_vec();
    let top = profile.by_descending_rate()[0];
    for t in 0..t_slots {
        let displaced = assignment[t];
        if displaced == top {
            continue;
        }
        assignment[t] = top;
        let trace = user_trace(&assignment, displaced, profile.is_demodulable(displaced));
        if average_aoi(&trace) > a_max[displaced] {
            assignment[t] = displaced;
        }
    }
    Ok(ScheduleMatrix::new(assignment, profile.k_ues()))
}

/// Best feasible schedule found by brute force, with its sum rate.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceOutcome {
    pub schedule: ScheduleMatrix,
    pub sum_rate: f64,
}

/// Enumerates every assignment of demodulable users to slots and returns
/// the maximum-sum-rate schedule whose per-user average AoI limits all
/// hold (including those of non-demodulable users, whose age never
/// resets). Returns `Ok(None)` if no assignment is feasible.
///
/// The enumeration size is `|demodulable|^t_slots`; instances beyond
/// [`BRUTE_FORCE_LIMIT`] are rejected.
pub fn brute_force_schedule(
    profile: &RateProfile,
    t_slots: usize,
    a_max: &[f64],
) -> Result<Option<BruteForceOutcome>, ScheduleError> {
    assert!(t_slots >= 1, "horizon must cover at least one slot");
    assert_eq!(a_max.len(), profile.k_ues(), "per-user limit count");
    let pool = profile.demodulable_set();
    if pool.is_empty() {
        return Err(ScheduleError::EmptyDemodulableSet);
    }
    let count = (pool.len() as u128)
        .checked_pow(t_slots as u32)
        .unwrap_or(u128::MAX);
    if count > BRUTE_FORCE_LIMIT {
        return Err(ScheduleError::InstanceTooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    // Users that never reset are feasible only if the never-scheduled
    // average (t + 3) / 2 fits their limit; that holds or fails globally.
    let never_scheduled_avg = (t_slots as f64 + 3.0) / 2.0;
    for k in 0..profile.k_ues() {
        if !profile.is_demodulable(k) && never_scheduled_avg > a_max[k] {
            return Ok(None);
        }
    }

    let mut best: Option<BruteForceOutcome> = None;
    let mut digits = vec![0usize; t_slots];
    let mut assignment = vec![pool[0]; t_slots];
    loop {
        for (t, &d) in digits.iter().enumerate() {
            assignment[t] = pool[d];
        }
        let feasible = pool.iter().all(|&k| {
            let trace = user_trace(&assignment, k, true);
            average_aoi(&trace) <= a_max[k]
        });
        if feasible {
            let sum: f64 = assignment.iter().map(|&k| profile.effective_rate(k)).sum();
            let better = match &best {
                None => true,
                Some(b) => sum > b.sum_rate,
            };
            if better {
                best = Some(BruteForceOutcome {
                    schedule: ScheduleMatrix::new(assignment.clone(), profile.k_ues()),
                    sum_rate: sum,
                });
            }
        }
        // Odometer increment, slot 0 least significant.
        let mut t = 0;
        loop {
            if t == t_slots {
                return Ok(best);
            }
            digits[t] += 1;
            if digits[t] < pool.len() {
                break;
            }
            digits[t] = 0;
            t += 1;
        }
    }
}

/// Per-constraint verdict on an arbitrary (possibly invalid) binary
/// schedule matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    /// Every entry is 0 or 1.
    pub entries_binary: bool,
    /// Every slot column sums to exactly one.
    pub one_ue_per_slot: bool,
    /// Per-user average AoI under the given demodulation flags.
    pub average_aoi: Vec<f64>,
    /// Per-user `average_aoi[k] <= a_max[k]`.
    pub within_limit: Vec<bool>,
}

impl FeasibilityReport {
    /// Structure constraints plus every user's AoI limit.
    pub fn feasible_all(&self) -> bool {
        self.entries_binary && self.one_ue_per_slot && self.within_limit.iter().all(|&ok| ok)
    }

    /// Structure constraints plus the AoI limits of demodulable users
    /// only; users that cannot demodulate are reported but not fatal.
    pub fn feasible_for_demodulable(&self, profile: &RateProfile) -> bool {
        self.entries_binary
            && self.one_ue_per_slot
            && (0..profile.k_ues()).all(|k| !profile.is_demodulable(k) || self.within_limit[k])
    }
}

/// Checks an arbitrary user-by-slot matrix against the scheduling
/// constraints. AoI traces treat an entry of exactly 1 as scheduled.
pub fn validate_schedule(
    u: &Array2<u8>,
    profile: &RateProfile,
    a_max: &[f64],
) -> FeasibilityReport {
    let (k_ues, t_slots) = u.dim();
    assert_eq!(k_ues, profile.k_ues(), "matrix rows must match user count");
    assert_eq!(a_max.len(), k_ues, "per-user limit count");
    assert!(t_slots >= 1, "horizon must cover at least one slot");
    let entries_binary = u.iter().all(|&e| e <= 1);
    let one_ue_per_slot =
        (0..t_slots).all(|t| (0..k_ues).map(|k| u32::from(u[[k, t]])).sum::<u32>() == 1);
    let average_aoi: Vec<f64> = (0..k_ues)
        .map(|k| {
            let scheduled: Vec<bool> = (0..t_slots).map(|t| u[[k, t]] == 1).collect();
            average_aoi(&aoi_trace(&scheduled, profile.is_demodulable(k)))
        })
        .collect();
    let within_limit: Vec<bool> = average_aoi
        .iter()
        .zip(a_max)
        .map(|(&avg, &limit)| avg <= limit)
        .collect();
    FeasibilityReport {
        entries_binary,
        one_ue_per_slot,
        average_aoi,
        within_limit,
    }
}
