//! Cycle-level model of the pipelined rotator.
//!
//! Each stage owns an output register and a sigma register. A `v/r` bit
//! travels with the data: when set, the stage derives its direction from
//! the signs it sees and latches it; when clear, it replays the latched one.

use super::{microrotate, RotatorConfig, Sigma};
use crate::error::{Error, Result};
use crate::formats::FixedWord;

/// Data entering the first stage in one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageInput {
    pub x: FixedWord,
    pub y: FixedWord,
    /// `v/r`: true for vectoring, false for rotation.
    pub vectoring: bool,
    /// Side-band value carried alongside (e.g. the block exponent).
    pub tag: u64,
}

pub type StageOutput = StageInput;

/// Register contents of one stage, for tracing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageSnapshot {
    pub data: Option<StageInput>,
    pub sigma: Option<Sigma>,
}

#[derive(Debug, Clone)]
pub struct PipelineState {
    cfg: RotatorConfig,
    regs: Vec<Option<StageInput>>,
    sigmas: Vec<Option<Sigma>>,
    cycle: u64,
}

impl PipelineState {
    pub fn new(cfg: RotatorConfig) -> Result<Self> {
        cfg.validate()?;
        let p = cfg.iterations as usize;
        Ok(PipelineState {
            cfg,
            regs: vec![None; p],
            sigmas: vec![None; p],
            cycle: 0,
        })
    }

    pub fn config(&self) -> &RotatorConfig {
        &self.cfg
    }

    /// Cycles stepped so far.
    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    /// Sigma registers, stage 0 first.
    pub fn sigma_registers(&self) -> &[Option<Sigma>] {
        &self.sigmas
    }

    pub fn snapshot(&self) -> Vec<StageSnapshot> {
        self.regs
            .iter()
            .zip(&self.sigmas)
            .map(|(d, s)| StageSnapshot { data: *d, sigma: *s })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.regs.iter().all(Option::is_none)
    }

    fn stage(&mut self, i: usize, d: StageInput) -> Result<StageInput> {
        let sigma = if d.vectoring {
            let s = Sigma::toward_axis(&d.x, &d.y);
            self.sigmas[i] = Some(s);
            s
        } else {
            self.sigmas[i].ok_or(Error::UninitializedSigma { stage: i as u32 })?
        };
        let (x, y) = microrotate(&d.x, &d.y, i as u32, sigma, self.cfg.hub)?;
        Ok(StageInput { x, y, ..d })
    }

    /// Advance one clock. Returns whatever leaves the last stage.
    pub fn step(&mut self, input: Option<StageInput>) -> Result<Option<StageOutput>> {
        let p = self.regs.len();
        let out = self.regs[p - 1].take();
        for i in (1..p).rev() {
            self.regs[i] = match self.regs[i - 1].take() {
                Some(d) => Some(self.stage(i, d)?),
                None => None,
            };
        }
        self.regs[0] = match input {
            Some(d) => Some(self.stage(0, d)?),
            None => None,
        };
        self.cycle += 1;
        Ok(out)
    }

    /// Feed a stream back to back, then drain. Outputs keep input order.
    pub fn run<I>(&mut self, stream: I) -> Result<Vec<StageOutput>>
    where
        I: IntoIterator<Item = StageInput>,
    {
        let mut out = Vec::new();
        for d in stream {
            out.extend(self.step(Some(d))?);
        }
        while !self.is_empty() {
            out.extend(self.step(None)?);
        }
        Ok(out)
    }
}
