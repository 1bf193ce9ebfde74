//! Policies and the observation features the learned ones read.

use maale_core::preprocess::{GrayImage, ObsTensor, Pipeline};
use maale_core::rng::{GameRng, Rng};
use maale_core::Action;
use serde::{Deserialize, Serialize};

/// What a policy sees for one seat at one agent step.
pub struct Observation<'a> {
    pipeline: &'a Pipeline,
    player: usize,
}

impl<'a> Observation<'a> {
    pub fn new(pipeline: &'a Pipeline, player: usize) -> Self {
        Observation { pipeline, player }
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn num_players(&self) -> usize {
        self.pipeline.num_players()
    }

    pub fn minimal_actions(&self) -> &'static [Action] {
        self.pipeline.env().minimal_action_set()
    }

    pub fn ram(&self) -> Vec<u8> {
        self.pipeline
            .env()
            .ram()
            .expect("observation of a reset env")
    }

    /// The stacked frames plus this seat's indicator channels. Only valid when
    /// the pipeline renders.
    pub fn tensor(&self) -> ObsTensor {
        self.pipeline.observation(self.player)
    }

    /// The most recent processed frame, when the pipeline renders.
    pub fn newest_frame(&self) -> Option<&GrayImage> {
        self.pipeline.frame_stack().frames().last()
    }
}

/// Which observation features a learned policy reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureMode {
    /// A coarse grid over the newest 84×84 frame, each cell one-hot in
    /// `levels` intensity bands.
    Pixels,
    /// Quantized bytes of the game state and all pairwise conjunctions.
    Ram,
}

impl std::str::FromStr for FeatureMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pixels" => Ok(FeatureMode::Pixels),
            "ram" => Ok(FeatureMode::Ram),
            _ => Err(format!(
                "unknown feature mode '{s}' (expected pixels or ram)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub mode: FeatureMode,
    /// log2 of the hashed feature table size per action.
    pub table_bits: u32,
    /// Quantization levels per state byte (ram mode).
    pub ram_bins: u32,
    /// Grid cell edge in processed pixels (pixel mode).
    pub cell: usize,
    /// Intensity bands per grid cell (pixel mode).
    pub levels: u32,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            mode: FeatureMode::Ram,
            table_bits: 16,
            ram_bins: 16,
            cell: 4,
            levels: 4,
        }
    }
}

impl FeatureConfig {
    pub fn table_size(&self) -> usize {
        1 << self.table_bits
    }

    pub fn needs_pixels(&self) -> bool {
        self.mode == FeatureMode::Pixels
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(4..=24).contains(&self.table_bits) {
            return Err(format!(
                "table_bits must be in 4..=24, got {}",
                self.table_bits
            ));
        }
        if !(2..=256).contains(&self.ram_bins) {
            return Err(format!(
                "ram_bins must be in 2..=256, got {}",
                self.ram_bins
            ));
        }
        if self.cell == 0 || !(2..=256).contains(&self.levels) {
            return Err("cell must be positive and levels in 2..=256".into());
        }
        Ok(())
    }

    /// Active feature indices for `obs`. The seat index is part of every
    /// feature, just as the indicator channels are part of the observation.
    pub fn extract(&self, obs: &Observation, out: &mut Vec<u32>) {
        out.clear();
        let seat = obs.player() as u64;
        let mask = (self.table_size() - 1) as u64;
        let mut push = |parts: [u64; 4]| out.push((hash(seat, parts) & mask) as u32);
        push([0, 0, 0, 0]);
        match self.mode {
            FeatureMode::Ram => {
                let bins = self.ram_bins as u64;
                let q: Vec<u64> = obs.ram().iter().map(|&b| b as u64 * bins / 256).collect();
                for (i, &a) in q.iter().enumerate() {
                    push([1, i as u64, a, 0]);
                    for (j, &b) in q.iter().enumerate().skip(i + 1) {
                        push([2, ((i as u64) << 16) | j as u64, a, b]);
                    }
                }
            }
            FeatureMode::Pixels => {
                let frame = obs
                    .newest_frame()
                    .expect("pixel features need a rendering pipeline");
                let c = self.cell;
                let levels = self.levels as u64;
                for cy in 0..frame.height / c {
                    for cx in 0..frame.width / c {
                        let mut sum = 0u64;
                        for y in cy * c..(cy + 1) * c {
                            for x in cx * c..(cx + 1) * c {
                                sum += frame.get(x, y) as u64;
                            }
                        }
                        let mean = sum / (c * c) as u64;
                        let cell = ((cy as u64) << 16) | cx as u64;
                        push([3, cell, mean * levels / 256, 0]);
                    }
                }
            }
        }
    }
}

fn hash(seat: u64, parts: [u64; 4]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seat;
    for p in parts {
        h = (h ^ p).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        h ^= h >> 29;
    }
    h ^ (h >> 32)
}

/// A linear action-value function over hashed binary features. With one-hot
/// features this is a tabular learner with a hashed table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QPolicy {
    pub game: String,
    pub mode: u8,
    pub actions: Vec<Action>,
    pub features: FeatureConfig,
    /// Exploration probability at decision time.
    pub epsilon: f64,
    /// `actions.len()` rows of `features.table_size()` weights.
    #[serde(skip)]
    pub weights: Vec<f32>,
}

impl QPolicy {
    pub fn new(game: &str, mode: u8, actions: &[Action], features: FeatureConfig) -> Self {
        QPolicy {
            game: game.to_string(),
            mode,
            actions: actions.to_vec(),
            weights: vec![0.0; actions.len() * features.table_size()],
            features,
            epsilon: 0.0,
        }
    }

    pub fn q_value(&self, features: &[u32], action: usize) -> f32 {
        let row = &self.weights[action * self.features.table_size()..];
        features.iter().map(|&f| row[f as usize]).sum()
    }

    pub fn q_values(&self, features: &[u32]) -> Vec<f32> {
        (0..self.actions.len())
            .map(|a| self.q_value(features, a))
            .collect()
    }

    /// Index of the highest value; exact ties are broken uniformly.
    pub fn greedy(&self, features: &[u32], rng: &mut GameRng) -> usize {
        let q = self.q_values(features);
        let best = q.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
        let ties: Vec<usize> = (0..q.len()).filter(|&a| q[a] == best).collect();
        if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.gen_range(0..ties.len())]
        }
    }

    /// Epsilon-greedy choice as an index into `actions`.
    pub fn choose(&self, features: &[u32], epsilon: f64, rng: &mut GameRng) -> usize {
        if epsilon > 0.0 && rng.gen_bool(epsilon.min(1.0)) {
            rng.gen_range(0..self.actions.len())
        } else {
            self.greedy(features, rng)
        }
    }

    /// Moves each active weight of `action` by `step`.
    pub fn nudge(&mut self, features: &[u32], action: usize, step: f32) {
        let size = self.features.table_size();
        let row = &mut self.weights[action * size..(action + 1) * size];
        for &f in features {
            row[f as usize] += step;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    /// Uniform over the game's minimal action set.
    Random,
    /// Always the same action.
    Scripted(Action),
    Q(Box<QPolicy>),
}

impl Policy {
    pub fn needs_pixels(&self) -> bool {
        match self {
            Policy::Q(q) => q.features.needs_pixels(),
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Policy::Random => "random".into(),
            Policy::Scripted(a) => format!("scripted:{}", a.name()),
            Policy::Q(q) => format!("linear-q:{:?}", q.features.mode).to_lowercase(),
        }
    }

    pub fn act(&self, obs: &Observation, rng: &mut GameRng, scratch: &mut Vec<u32>) -> Action {
        match self {
            Policy::Random => {
                let set = obs.minimal_actions();
                set[rng.gen_range(0..set.len())]
            }
            Policy::Scripted(a) => *a,
            Policy::Q(q) => {
                q.features.extract(obs, scratch);
                q.actions[q.choose(scratch, q.epsilon, rng)]
            }
        }
    }
}
