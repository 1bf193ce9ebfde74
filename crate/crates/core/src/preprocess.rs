//! Observation and reward pipeline: sticky actions, grayscale, area resize,
//! frame skip, frame stacking, per-player indicator channels and reward
//! clipping.

use std::collections::VecDeque;

use rand::Rng;

use crate::action::Action;
use crate::env::Env;
use crate::error::EnvError;
use crate::rng::{derive_seed, rng_from_seed, GameRng};
use crate::screen::Screen;

pub const OBS_SIZE: usize = 84;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Probability that a player's previous action repeats instead of the new one.
    pub sticky_p: f64,
    pub skip: u32,
    pub stack: usize,
    /// Clip rewards to [-1, 1]; a training-time setting.
    pub clip: bool,
    /// Append one indicator channel per player.
    pub indicator: bool,
    pub width: usize,
    pub height: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            sticky_p: 0.25,
            skip: 4,
            stack: 4,
            clip: false,
            indicator: true,
            width: OBS_SIZE,
            height: OBS_SIZE,
        }
    }
}

impl PipelineConfig {
    pub fn training() -> Self {
        PipelineConfig {
            clip: true,
            ..Self::default()
        }
    }

    /// Checks the ranges every stage relies on.
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..1.0).contains(&self.sticky_p) {
            return Err(format!("sticky_p must be in [0, 1), got {}", self.sticky_p));
        }
        if self.skip == 0 || self.stack == 0 || self.width == 0 || self.height == 0 {
            return Err("skip, stack and output size must be at least 1".into());
        }
        Ok(())
    }
}

/// Returns `prev` with probability `p`, otherwise `action`.
pub fn sticky<R: Rng>(action: Action, prev: Action, p: f64, rng: &mut R) -> Action {
    if p > 0.0 && rng.gen_bool(p) {
        prev
    } else {
        action
    }
}

/// A single-channel 8-bit image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), width * height, "image data length");
        GrayImage {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, v: u8) -> Self {
        Self::new(width, height, vec![v; width * height])
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }
}

/// Rounded luma with integer arithmetic: (299 R + 587 G + 114 B) / 1000.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    ((299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500) / 1000) as u8
}

pub fn to_grayscale(screen: &Screen) -> GrayImage {
    let rgb = screen.as_bytes();
    let mut data = vec![0u8; Screen::WIDTH * Screen::HEIGHT];
    for (d, p) in data.iter_mut().zip(rgb.chunks_exact(3)) {
        *d = luma(p[0], p[1], p[2]);
    }
    GrayImage::new(Screen::WIDTH, Screen::HEIGHT, data)
}

/// Overlap weights of each output cell against the source cells along one
/// axis, in units of 1/`dst`: output cell `o` spans `[o*src, (o+1)*src)` and
/// source cell `s` spans `[s*dst, (s+1)*dst)` on the common scale.
/// Returned flat as `(output, source, weight)` triples ordered by output.
fn axis_weights(src: usize, dst: usize) -> Vec<(usize, usize, u32)> {
    let mut out = Vec::with_capacity(dst * (src / dst + 2));
    for o in 0..dst {
        let (lo, hi) = (o * src, (o + 1) * src);
        for s in lo / dst..=(hi - 1) / dst {
            let a = lo.max(s * dst);
            let b = hi.min((s + 1) * dst);
            if b > a {
                out.push((o, s, (b - a) as u32));
            }
        }
    }
    out
}

/// Area-interpolated resize: each output pixel is the exact area-weighted
/// mean of the source region it covers, rounded half up.
pub fn resize_area(img: &GrayImage, width: usize, height: usize) -> GrayImage {
    let wx = axis_weights(img.width, width);
    let wy = axis_weights(img.height, height);
    // Horizontal pass: per source row, weighted sums for each output column.
    // Bounded by 255 * src_w, so u32 holds it.
    let mut tmp = vec![0u32; img.height * width];
    for (line, acc) in img
        .data
        .chunks_exact(img.width)
        .zip(tmp.chunks_exact_mut(width))
    {
        for &(o, s, w) in &wx {
            acc[o] += line[s] as u32 * w;
        }
    }
    // Vertical pass; each output cell covers src_w * src_h units of area.
    let mut sums = vec![0u64; width * height];
    for &(o, s, w) in &wy {
        let row = &tmp[s * width..(s + 1) * width];
        for (d, &v) in sums[o * width..(o + 1) * width].iter_mut().zip(row) {
            *d += v as u64 * w as u64;
        }
    }
    let den = (img.width * img.height) as u64;
    let data = sums
        .iter()
        .map(|&sum| ((2 * sum + den) / (2 * den)) as u8)
        .collect();
    GrayImage::new(width, height, data)
}

/// Clamps a raw reward to [-1, 1].
pub fn clip_reward(r: i32) -> f32 {
    r.clamp(-1, 1) as f32
}

/// What a skipped step produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkipResult {
    /// Per-player rewards summed over the executed frames.
    pub rewards: Vec<i32>,
    pub frames: u32,
    pub terminal: bool,
}

/// Repeats the joint action for up to `skip` frames, stopping early at the
/// end of the game.
pub fn frame_skip(env: &mut Env, actions: &[Action], skip: u32) -> Result<SkipResult, EnvError> {
    let mut rewards = vec![0; env.num_players()];
    let mut frames = 0;
    let mut terminal = env.game_over()?;
    while frames < skip && !terminal {
        env.step(actions)?;
        for (t, r) in rewards.iter_mut().zip(env.last_rewards()) {
            *t += r;
        }
        frames += 1;
        terminal = env.game_over()?;
    }
    Ok(SkipResult {
        rewards,
        frames,
        terminal,
    })
}

/// The last `depth` processed frames, oldest first.
#[derive(Debug, Clone)]
pub struct FrameStack {
    depth: usize,
    frames: VecDeque<GrayImage>,
}

impl FrameStack {
    pub fn new(depth: usize) -> Self {
        assert!(depth >= 1);
        FrameStack {
            depth,
            frames: VecDeque::with_capacity(depth),
        }
    }

    /// Fills the whole window with `first`.
    pub fn reset(&mut self, first: GrayImage) {
        self.frames.clear();
        for _ in 1..self.depth {
            self.frames.push_back(first.clone());
        }
        self.frames.push_back(first);
    }

    pub fn push(&mut self, frame: GrayImage) {
        if self.frames.len() == self.depth {
            self.frames.pop_front();
        }
        self.frames.push_back(frame);
    }

    pub fn frames(&self) -> impl Iterator<Item = &GrayImage> {
        self.frames.iter()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

/// An observation tensor, height × width × channels, channel-last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObsTensor {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

impl ObsTensor {
    /// Interleaves single-channel planes into channel-last order.
    pub fn from_planes(width: usize, height: usize, planes: &[&[u8]]) -> Self {
        let channels = planes.len();
        let mut data = vec![0u8; width * height * channels];
        for (c, plane) in planes.iter().enumerate() {
            assert_eq!(plane.len(), width * height);
            for (i, &v) in plane.iter().enumerate() {
                data[i * channels + c] = v;
            }
        }
        ObsTensor {
            height,
            width,
            channels,
            data,
        }
    }

    pub fn get(&self, y: usize, x: usize, c: usize) -> u8 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// One channel as a row-major plane.
    pub fn channel(&self, c: usize) -> Vec<u8> {
        self.data
            .iter()
            .skip(c)
            .step_by(self.channels)
            .copied()
            .collect()
    }

    /// Header of three little-endian u32 (height, width, channels), then the
    /// channel-last bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.data.len());
        for v in [self.height, self.width, self.channels] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        out.extend_from_slice(&self.data);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let header = |i: usize| -> Option<usize> {
            let b = bytes.get(4 * i..4 * i + 4)?;
            Some(u32::from_le_bytes(b.try_into().ok()?) as usize)
        };
        let (height, width, channels) = (header(0)?, header(1)?, header(2)?);
        let data = bytes.get(12..)?;
        (data.len() == height * width * channels).then(|| ObsTensor {
            height,
            width,
            channels,
            data: data.to_vec(),
        })
    }
}

/// Stacked frames followed by `num_players` constant channels, the one for
/// `player` at 255 and the rest at 0.
pub fn agent_indicator(stack: &FrameStack, player: usize, num_players: usize) -> ObsTensor {
    assert!(player < num_players, "player index out of range");
    let first = stack.frames().next().expect("stack is seeded");
    let (w, h) = (first.width, first.height);
    let hot = vec![255u8; w * h];
    let cold = vec![0u8; w * h];
    let mut planes: Vec<&[u8]> = stack.frames().map(|f| f.data.as_slice()).collect();
    for j in 0..num_players {
        planes.push(if j == player { &hot } else { &cold });
    }
    ObsTensor::from_planes(w, h, &planes)
}

/// Stacked frames only, without indicator channels.
pub fn stacked(stack: &FrameStack) -> ObsTensor {
    let first = stack.frames().next().expect("stack is seeded");
    let planes: Vec<&[u8]> = stack.frames().map(|f| f.data.as_slice()).collect();
    ObsTensor::from_planes(first.width, first.height, &planes)
}

/// Result of one agent step through the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineStep {
    /// Raw per-player rewards summed over the skipped frames.
    pub raw_rewards: Vec<i32>,
    /// What the agents see: clipped when the config asks for it.
    pub rewards: Vec<f32>,
    pub frames: u32,
    pub terminal: bool,
}

/// An environment wrapped in the full observation pipeline.
#[derive(Debug)]
pub struct Pipeline {
    env: Env,
    config: PipelineConfig,
    prev: Vec<Action>,
    sticky_rng: GameRng,
    stack: FrameStack,
    /// When false, frames are not rendered or stacked (reward-only stepping).
    observe: bool,
}

impl Pipeline {
    pub fn new(env: Env, config: PipelineConfig) -> Self {
        config.validate().expect("valid pipeline config");
        Pipeline {
            prev: vec![Action::Noop; env.num_players()],
            stack: FrameStack::new(config.stack),
            sticky_rng: rng_from_seed(0),
            env,
            config,
            observe: true,
        }
    }

    /// Skips rendering; observations are unavailable until re-enabled at reset.
    pub fn set_observe(&mut self, observe: bool) {
        self.observe = observe;
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn env_mut(&mut self) -> &mut Env {
        &mut self.env
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn num_players(&self) -> usize {
        self.env.num_players()
    }

    fn processed_frame(&mut self) -> Result<GrayImage, EnvError> {
        let (w, h) = (self.config.width, self.config.height);
        let gray = to_grayscale(self.env.screen_rgb()?);
        Ok(resize_area(&gray, w, h))
    }

    pub fn reset(&mut self, seed: u64) -> Result<(), EnvError> {
        self.env.reset(seed)?;
        self.sticky_rng = rng_from_seed(derive_seed(seed, 0x571c));
        self.prev = vec![Action::Noop; self.env.num_players()];
        if self.observe {
            let first = self.processed_frame()?;
            self.stack.reset(first);
        }
        Ok(())
    }

    pub fn step(&mut self, actions: &[Action]) -> Result<PipelineStep, EnvError> {
        if actions.len() != self.prev.len() {
            return Err(EnvError::WrongArity {
                expected: self.prev.len(),
                got: actions.len(),
            });
        }
        let p = self.config.sticky_p;
        let mut taken = Vec::with_capacity(actions.len());
        for (prev, &a) in self.prev.iter_mut().zip(actions) {
            let chosen = sticky(a, *prev, p, &mut self.sticky_rng);
            *prev = chosen;
            taken.push(chosen);
        }
        let skip = frame_skip(&mut self.env, &taken, self.config.skip)?;
        if self.observe {
            let frame = self.processed_frame()?;
            self.stack.push(frame);
        }
        let rewards = skip
            .rewards
            .iter()
            .map(|&r| {
                if self.config.clip {
                    clip_reward(r)
                } else {
                    r as f32
                }
            })
            .collect();
        Ok(PipelineStep {
            raw_rewards: skip.rewards,
            rewards,
            frames: skip.frames,
            terminal: skip.terminal,
        })
    }

    /// The observation for `player`.
    pub fn observation(&self, player: usize) -> ObsTensor {
        if self.config.indicator {
            agent_indicator(&self.stack, player, self.env.num_players())
        } else {
            stacked(&self.stack)
        }
    }

    pub fn frame_stack(&self) -> &FrameStack {
        &self.stack
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luma_values() {
        assert_eq!(luma(255, 255, 255), 255);
        assert_eq!(luma(0, 0, 0), 0);
        assert_eq!(luma(255, 0, 0), 76);
    }

    #[test]
    fn resize_small_example() {
        let img = GrayImage::new(4, 4, [0, 0, 255, 255].repeat(4));
        let out = resize_area(&img, 2, 2);
        assert_eq!(out.data, vec![0, 255, 0, 255]);
        let rows = GrayImage::new(4, 4, [[0u8; 4], [0; 4], [255; 4], [255; 4]].concat());
        assert_eq!(resize_area(&rows, 2, 2).data, vec![0, 0, 255, 255]);
    }

    #[test]
    fn axis_weights_cover_source() {
        for (src, dst) in [(160, 84), (210, 84), (4, 2), (3, 7)] {
            let w = axis_weights(src, dst);
            let mut per_out = vec![0u64; dst];
            let mut per_src = vec![0u64; src];
            for &(o, s, a) in &w {
                per_out[o] += a as u64;
                per_src[s] += a as u64;
            }
            assert!(per_out.iter().all(|&a| a == src as u64));
            assert!(per_src.iter().all(|&a| a == dst as u64));
        }
    }

    #[test]
    fn frame_stack_slides() {
        let f = |v| GrayImage::filled(2, 2, v);
        let mut s = FrameStack::new(4);
        s.reset(f(0));
        s.push(f(1));
        let vals: Vec<u8> = s.frames().map(|i| i.data[0]).collect();
        assert_eq!(vals, vec![0, 0, 0, 1]);
        for v in 2..6 {
            s.push(f(v));
        }
        let vals: Vec<u8> = s.frames().map(|i| i.data[0]).collect();
        assert_eq!(vals, vec![2, 3, 4, 5]);
    }

    #[test]
    fn tensor_bytes_round_trip() {
        let t = ObsTensor::from_planes(2, 1, &[&[1, 2], &[3, 4]]);
        assert_eq!(t.data, vec![1, 3, 2, 4]);
        assert_eq!(t.channel(1), vec![3, 4]);
        let b = t.to_bytes();
        assert_eq!(&b[..4], &1u32.to_le_bytes());
        assert_eq!(ObsTensor::from_bytes(&b).unwrap(), t);
    }
}
