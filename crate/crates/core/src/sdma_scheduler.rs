//! Spatial channel assignment.
//!
//! Users whose directions of arrival are at least `theta_min` apart may
//! share a physical channel (carrier, slot or code), each on its own
//! spatial channel. Assignment is a greedy first-fit over DOA-sorted users;
//! tracking is exponential smoothing on the circle.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::{PI, TAU};

use crate::{Error, Result};

/// Default minimum angular separation between co-channel users (30°).
pub const DEFAULT_THETA_MIN: f64 = PI / 6.0;

/// Wrap into `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Shortest angular distance between two azimuths, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(TAU);
    d.min(TAU - d)
}

/// Signed shortest rotation taking `from` to `to`, in `(−π, π]`.
pub fn signed_circular_difference(to: f64, from: f64) -> f64 {
    let d = (to - from).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Users and their current directions of arrival.
#[derive(Debug, Clone, PartialEq)]
pub struct UserSet {
    doas: Vec<(u32, f64)>,
}

impl UserSet {
    /// Angles are wrapped into `[0, 2π)`; ids must be unique.
    pub fn new(doas: Vec<(u32, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(doas.len());
        for &(id, theta) in &doas {
            if !seen.insert(id) {
                return Err(Error::domain(format!("duplicate user id {id}")));
            }
            if !theta.is_finite() {
                return Err(Error::domain(format!("user {id} has non-finite DOA")));
            }
        }
        Ok(UserSet {
            doas: doas.into_iter().map(|(id, t)| (id, wrap_angle(t))).collect(),
        })
    }

    pub fn empty() -> Self {
        UserSet { doas: Vec::new() }
    }

    pub fn doas(&self) -> &[(u32, f64)] {
        &self.doas
    }

    pub fn len(&self) -> usize {
        self.doas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doas.is_empty()
    }

    pub fn doa(&self, id: u32) -> Option<f64> {
        self.doas.iter().find(|(u, _)| *u == id).map(|&(_, t)| t)
    }

    fn id_set(&self) -> HashSet<u32> {
        self.doas.iter().map(|&(id, _)| id).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssignmentEntry {
    pub user_id: u32,
    pub physical_channel: u32,
    pub spatial_channel: u32,
}

/// Entries are kept sorted by user id.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    entries: Vec<AssignmentEntry>,
    theta_min: f64,
}

impl Assignment {
    pub fn entries(&self) -> &[AssignmentEntry] {
        &self.entries
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_min
    }

    pub fn physical_channels(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.physical_channel as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Every user of `users` is assigned exactly once and co-channel users
    /// are at least `theta_min` apart.
    pub fn is_valid_for(&self, users: &UserSet) -> bool {
        if self.entries.len() != users.len() {
            return false;
        }
        let mut by_channel: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for e in &self.entries {
            match users.doa(e.user_id) {
                Some(t) => by_channel.entry(e.physical_channel).or_default().push(t),
                None => return false,
            }
        }
        let ids: HashSet<u32> = self.entries.iter().map(|e| e.user_id).collect();
        if ids.len() != self.entries.len() {
            return false;
        }
        by_channel.values().all(|members| {
            members.iter().enumerate().all(|(i, &a)| {
                members[i + 1..]
                    .iter()
                    .all(|&b| circular_distance(a, b) >= self.theta_min)
            })
        })
    }
}

fn check_theta_min(theta_min: f64) -> Result<()> {
    if theta_min > 0.0 && theta_min <= PI {
        Ok(())
    } else {
        Err(Error::domain(format!("theta_min {theta_min} rad must lie in (0, π]")))
    }
}

/// Greedy first-fit: users in ascending DOA order (ties by id) each join the
/// lowest-index physical channel with no member closer than `theta_min`.
/// Spatial channel indices follow join order within a physical channel.
pub fn assign_channels(users: &UserSet, theta_min: f64) -> Result<Assignment> {
    check_theta_min(theta_min)?;
    let mut order: Vec<(u32, f64)> = users.doas.clone();
    order.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut channels: Vec<Vec<f64>> = Vec::new();
    let mut entries = Vec::with_capacity(order.len());
    for (user_id, theta) in order {
        let slot = channels
            .iter()
            .position(|members| members.iter().all(|&m| circular_distance(m, theta) >= theta_min));
        let physical = match slot {
            Some(c) => c,
            None => {
                channels.push(Vec::new());
                channels.len() - 1
            }
        };
        entries.push(AssignmentEntry {
            user_id,
            physical_channel: physical as u32,
            spatial_channel: channels[physical].len() as u32,
        });
        channels[physical].push(theta);
    }
    entries.sort_by_key(|e| e.user_id);
    Ok(Assignment { entries, theta_min })
}

pub fn channels_required(users: &UserSet, theta_min: f64) -> Result<usize> {
    Ok(assign_channels(users, theta_min)?.physical_channels())
}

/// One smoothing step: each observed user moves a fraction `alpha` of the
/// signed circular difference toward its observation.
pub fn track_doas(users: &UserSet, observations: &[(u32, f64)], alpha: f64) -> Result<UserSet> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("tracking gain {alpha} must lie in (0, 1]")));
    }
    let mut doas = users.doas.clone();
    for &(id, observed) in observations {
        if !observed.is_finite() {
            return Err(Error::domain(format!("observation for user {id} is not finite")));
        }
        let slot = doas
            .iter_mut()
            .find(|(u, _)| *u == id)
            .ok_or(Error::UnknownUser(id))?;
        let step = signed_circular_difference(wrap_angle(observed), slot.1);
        slot.1 = wrap_angle(slot.1 + alpha * step);
    }
    Ok(UserSet { doas })
}

/// Keeps `current` if it is still valid for the moved users, otherwise
/// reassigns from scratch with the same `theta_min`.
pub fn reassign_if_violated(users: &UserSet, current: &Assignment) -> Result<Assignment> {
    let assigned: HashSet<u32> = current.entries.iter().map(|e| e.user_id).collect();
    if assigned != users.id_set() {
        return Err(Error::IdMismatch(format!(
            "assignment covers {} users, user set has {}",
            assigned.len(),
            users.len()
        )));
    }
    if current.is_valid_for(users) {
        Ok(current.clone())
    } else {
        assign_channels(users, current.theta_min)
    }
}
