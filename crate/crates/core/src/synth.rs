//! Deterministic synthetic conversation: `n` seated participants, one
//! speaker at a time, nod-triggered turn handovers going once clockwise and
//! once anticlockwise around the group.
//!
//! Each turn has three phases:
//!
//! 1. **stable**: the speaker looks toward the formation centre (with a slow
//!    gaze drift that settles on the centre at nod onset), listeners face
//!    the speaker;
//! 2. **nod**: the next speaker nods (sinusoidal pitch about their lateral
//!    axis) while still facing the speaker;
//! 3. **reorient**: the speaker turns toward the nodder by slerp; the floor
//!    passes at the following frame.
//!
//! Stable-phase frames depend only on the speaker and the number of frames
//! left before nod onset. A speaker's stable block is therefore bitwise
//! identical in both rounds, and only a nod reveals who speaks next.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quat;
use crate::sequence::{BehaviorSequence, FEATURE_DIM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConversationConfig {
    pub participants: usize,
    /// Seating radius in meters.
    pub radius: f64,
    /// Extra stable frames before the first nod.
    pub preamble_frames: usize,
    pub stable_frames: usize,
    pub nod_frames: usize,
    pub reorient_frames: usize,
    /// Peak nod pitch in radians.
    pub nod_amplitude: f64,
    pub nod_cycles: f64,
    /// Speaker gaze offset (radians) from the centre at the start of the
    /// longest stable phase; shrinks linearly to zero at nod onset.
    pub gaze_drift: f64,
    /// Frames per second; recorded only.
    pub frame_rate: f64,
    pub seed: u64,
    /// Std of Gaussian noise added to quaternion components before
    /// renormalizing. Zero keeps the dataset exact.
    pub noise_std: f64,
}

impl Default for ConversationConfig {
    fn default() -> Self {
        Self {
            participants: 4,
            radius: 1.0,
            preamble_frames: 48,
            stable_frames: 90,
            nod_frames: 15,
            reorient_frames: 30,
            nod_amplitude: 0.35,
            nod_cycles: 1.0,
            gaze_drift: 0.2,
            frame_rate: 15.0,
            seed: 0,
            noise_std: 0.0,
        }
    }
}

impl ConversationConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: &str| Err(Error::param(format!("{field}: {why}")));
        if self.participants < 3 {
            return bad("participants", "need at least 3");
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return bad("radius", "must be > 0");
        }
        if self.stable_frames == 0 {
            return bad("stable_frames", "must be at least 1");
        }
        if self.nod_frames == 0 {
            return bad("nod_frames", "must be at least 1");
        }
        if self.reorient_frames == 0 {
            return bad("reorient_frames", "must be at least 1");
        }
        if !(self.nod_amplitude > 0.0 && self.nod_amplitude < FRAC_PI_2) {
            return bad("nod_amplitude", "must lie in (0, pi/2)");
        }
        if !(self.nod_cycles.is_finite() && self.nod_cycles > 0.0) {
            return bad("nod_cycles", "must be > 0");
        }
        if !(self.gaze_drift >= 0.0 && self.gaze_drift < FRAC_PI_2) {
            return bad("gaze_drift", "must lie in [0, pi/2)");
        }
        if !(self.frame_rate.is_finite() && self.frame_rate > 0.0) {
            return bad("frame_rate", "must be > 0");
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return bad("noise_std", "must be >= 0");
        }
        Ok(())
    }

    /// Frames from a turn's handover to the next: stable + nod + reorient.
    pub fn turn_frames(&self) -> usize {
        self.stable_frames + self.nod_frames + self.reorient_frames
    }

    /// Total episode length: preamble, `2n` turns, and a closing stable phase.
    pub fn total_frames(&self) -> usize {
        self.preamble_frames + 2 * self.participants * self.turn_frames() + self.stable_frames
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Toward decreasing seat index (seats are laid out anticlockwise).
    Clockwise,
    Anticlockwise,
}

impl Direction {
    pub fn neighbor(&self, seat: usize, n: usize) -> usize {
        match self {
            Direction::Clockwise => (seat + n - 1) % n,
            Direction::Anticlockwise => (seat + 1) % n,
        }
    }
}

/// Ground-truth record of one turn change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnEvent {
    pub speaker: usize,
    pub next_speaker: usize,
    pub nod_onset_frame: usize,
    /// First frame at which `next_speaker` holds the floor.
    pub handover_frame: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seat {
    pub position: [f64; 2],
    /// Orientation facing the formation centre.
    pub base_orientation: Quat,
}

/// Seats at angles `2 pi i / n` on a circle, each facing the centroid.
pub fn participant_geometry(config: &ConversationConfig) -> Result<Vec<Seat>> {
    if config.participants < 3 {
        return Err(Error::param("participants: need at least 3"));
    }
    let n = config.participants;
    Ok((0..n)
        .map(|i| {
            let angle = 2.0 * PI * i as f64 / n as f64;
            Seat {
                position: [config.radius * angle.cos(), config.radius * angle.sin()],
                base_orientation: Quat::from_yaw(angle + PI),
            }
        })
        .collect())
}

/// Generated episode with its turn log.
#[derive(Debug, Clone)]
pub struct Conversation {
    pub sequence: BehaviorSequence,
    pub events: Vec<TurnEvent>,
    pub seats: Vec<Seat>,
}

struct Poser<'a> {
    config: &'a ConversationConfig,
    seats: Vec<Seat>,
    yaw_center: Vec<f64>,
}

impl Poser<'_> {
    fn facing(&self, from: usize, to: usize) -> Quat {
        let [ax, ay] = self.seats[from].position;
        let [bx, by] = self.seats[to].position;
        Quat::from_yaw((by - ay).atan2(bx - ax))
    }

    /// Speaker pose `frames_to_nod` frames before nod onset (0 at and after it).
    fn speaker(&self, s: usize, frames_to_nod: usize) -> Quat {
        let span = (self.config.preamble_frames + self.config.stable_frames) as f64;
        let drift = self.config.gaze_drift * frames_to_nod as f64 / span;
        Quat::from_yaw(self.yaw_center[s] + drift)
    }

    /// Nod pitch at step `k` (1-based) of the nod phase.
    fn nod(&self, k: usize) -> Quat {
        let c = self.config;
        let theta = c.nod_amplitude
            * (2.0 * PI * c.nod_cycles * k as f64 / c.nod_frames as f64).sin();
        Quat::from_axis_angle([0.0, 1.0, 0.0], theta)
    }
}

/// Generate the conversation episode.
pub fn generate(config: &ConversationConfig) -> Result<Conversation> {
    config.validate()?;
    let n = config.participants;
    let seats = participant_geometry(config)?;
    let poser = Poser {
        config,
        yaw_center: (0..n)
            .map(|i| 2.0 * PI * i as f64 / n as f64 + PI)
            .collect(),
        seats: seats.clone(),
    };

    let mut data = Vec::with_capacity(config.total_frames() * n * FEATURE_DIM);
    let mut push_frame = |speaker: usize, pose: &dyn Fn(usize) -> Quat| {
        for i in 0..n {
            data.extend_from_slice(&pose(i).normalized().to_array());
            data.push(if i == speaker { 1.0 } else { 0.0 });
        }
    };

    let mut turns = Vec::with_capacity(2 * n);
    for dir in [Direction::Clockwise, Direction::Anticlockwise] {
        let mut s = 0;
        for _ in 0..n {
            let next = dir.neighbor(s, n);
            turns.push((s, next, dir));
            s = next;
        }
    }

    let mut events = Vec::with_capacity(turns.len());
    let mut cursor = 0;
    for (k, &(s, next, direction)) in turns.iter().enumerate() {
        let stable = config.stable_frames + if k == 0 { config.preamble_frames } else { 0 };
        let onset = cursor + stable;
        for t in cursor..onset {
            let speaker = poser.speaker(s, onset - t);
            push_frame(s, &|i| if i == s { speaker } else { poser.facing(i, s) });
        }
        for k in 1..=config.nod_frames {
            let speaker = poser.speaker(s, 0);
            let nodder = poser.facing(next, s) * poser.nod(k);
            push_frame(s, &|i| match i {
                i if i == s => speaker,
                i if i == next => nodder,
                i => poser.facing(i, s),
            });
        }
        let from = poser.speaker(s, 0);
        let to = poser.facing(s, next);
        for j in 0..config.reorient_frames {
            let u = (j + 1) as f64 / config.reorient_frames as f64;
            let speaker = from.slerp(&to, u);
            push_frame(s, &|i| if i == s { speaker } else { poser.facing(i, s) });
        }
        let handover = onset + config.nod_frames + config.reorient_frames;
        events.push(TurnEvent {
            speaker: s,
            next_speaker: next,
            nod_onset_frame: onset,
            handover_frame: handover,
            direction,
        });
        cursor = handover;
    }
    // Closing stable phase so the last handover has an observable future.
    let last = turns.last().map_or(0, |t| t.1);
    for j in 0..config.stable_frames {
        let speaker = poser.speaker(last, config.stable_frames - j);
        push_frame(last, &|i| if i == last { speaker } else { poser.facing(i, last) });
    }

    if config.noise_std > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let noise = Normal::new(0.0, config.noise_std)
            .map_err(|e| Error::param(format!("noise_std: {e}")))?;
        for chunk in data.chunks_exact_mut(FEATURE_DIM) {
            let q = Quat::new(
                chunk[0] + noise.sample(&mut rng),
                chunk[1] + noise.sample(&mut rng),
                chunk[2] + noise.sample(&mut rng),
                chunk[3] + noise.sample(&mut rng),
            )
            .normalized();
            chunk[..4].copy_from_slice(&q.to_array());
        }
    }

    Ok(Conversation {
        sequence: BehaviorSequence::new(n, data)?,
        events,
        seats,
    })
}
