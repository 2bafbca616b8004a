use std::collections::VecDeque;

use super::cycles::{INPUT_CONVERTER_STAGES, OUTPUT_CONVERTER_STAGES};
use super::GivensUnit;
use crate::cordic::{PipelineState, StageInput, StageSnapshot};
use crate::error::Result;
use crate::formats::{FixedWord, FpValue};

/// One element pair presented to the unit in a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamInput {
    pub x: FpValue,
    pub y: FpValue,
    pub vectoring: bool,
}

type Staged = Option<(FixedWord, FixedWord, bool, u32)>;

/// Cycle-level FP unit: input converter stages, rotator pipeline, output
/// converter stages.
#[derive(Debug, Clone)]
pub struct StreamingUnit {
    unit: GivensUnit,
    front: VecDeque<Staged>,
    pipe: PipelineState,
    back: VecDeque<Option<(FixedWord, FixedWord, u32)>>,
}

impl StreamingUnit {
    pub fn new(unit: GivensUnit) -> Result<Self> {
        let pipe = PipelineState::new(unit.config().rotator)?;
        Ok(StreamingUnit {
            unit,
            front: vec![None; INPUT_CONVERTER_STAGES as usize].into(),
            pipe,
            back: vec![None; OUTPUT_CONVERTER_STAGES as usize].into(),
        })
    }

    pub fn latency(&self) -> u64 {
        INPUT_CONVERTER_STAGES + self.unit.config().rotator.iterations as u64 + OUTPUT_CONVERTER_STAGES
    }

    pub fn cycle(&self) -> u64 {
        self.pipe.cycle()
    }

    pub fn rotator_snapshot(&self) -> Vec<StageSnapshot> {
        self.pipe.snapshot()
    }

    pub fn is_empty(&self) -> bool {
        self.front.iter().all(Option::is_none) && self.pipe.is_empty() && self.back.iter().all(Option::is_none)
    }

    /// Advance one clock; returns the pair leaving the output converter.
    pub fn step(&mut self, input: Option<StreamInput>) -> Result<Option<(FpValue, FpValue)>> {
        let out = match self.back.pop_front().flatten() {
            Some((x, y, m_exp)) => Some(self.unit.finish(&x, &y, m_exp)?),
            None => None,
        };
        let staged = self
            .front
            .pop_front()
            .flatten()
            .map(|(x, y, vectoring, m_exp)| StageInput {
                x,
                y,
                vectoring,
                tag: m_exp as u64,
            });
        let rotated = self.pipe.step(staged)?;
        self.back.push_back(rotated.map(|o| (o.x, o.y, o.tag as u32)));
        let loaded = match input {
            Some(i) => {
                let (x, y, m_exp) = self.unit.load(&i.x, &i.y)?;
                Some((x, y, i.vectoring, m_exp))
            }
            None => None,
        };
        self.front.push_back(loaded);
        Ok(out)
    }

    /// Stream inputs back to back and drain.
    pub fn run<I>(&mut self, inputs: I) -> Result<Vec<(FpValue, FpValue)>>
    where
        I: IntoIterator<Item = StreamInput>,
    {
        let mut out = Vec::new();
        for i in inputs {
            out.extend(self.step(Some(i))?);
        }
        while !self.is_empty() {
            out.extend(self.step(None)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::FpFormat;
    use crate::qrd::{GivensUnitConfig, RotationUnit};

    #[test]
    fn latency_and_equivalence() {
        let unit = GivensUnit::new(GivensUnitConfig::hub(FpFormat::SINGLE, 26, 24)).unwrap();
        let f = |v: f64| unit.encode(v).unwrap();
        let row = [(1.5, -0.75), (0.3, 2.0), (-4.0, 0.001), (0.0, 1.0)];
        let mut s = StreamingUnit::new(unit.clone()).unwrap();
        assert_eq!(s.latency(), 29);
        let first = StreamInput {
            x: f(row[0].0),
            y: f(row[0].1),
            vectoring: true,
        };
        let mut arrival = None;
        for c in 0..40u64 {
            if s.step((c == 0).then_some(first)).unwrap().is_some() {
                arrival = Some(c);
            }
        }
        assert_eq!(arrival, Some(29));

        let mut s = StreamingUnit::new(unit.clone()).unwrap();
        let out = s
            .run(row.iter().enumerate().map(|(k, &(x, y))| StreamInput {
                x: f(x),
                y: f(y),
                vectoring: k == 0,
            }))
            .unwrap();
        let (vx, vy, sigma) = unit.vector(&f(row[0].0), &f(row[0].1)).unwrap();
        assert_eq!(out[0], (vx, vy));
        for (o, &(x, y)) in out.iter().zip(&row).skip(1) {
            assert_eq!(*o, unit.rotate(&f(x), &f(y), &sigma).unwrap());
        }
    }
}
