use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_lab::MatrixOp;
use crate::sequence_space::{Direction, ShiftOperator, SpaceSpec, WeightSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Shift,
    Matrix,
}

/// One operator as read from a JSON config file.
///
/// ```json
/// {"label": "td", "kind": "shift", "space": {"kind": "lp", "p": 2},
///  "payload": {"family": {"name": "theorem_d", "alpha": 2}}}
/// ```
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    pub label: String,
    pub kind: OperatorKind,
    /// Required for shifts, ignored for matrices.
    #[serde(default)]
    pub space: Option<SpaceSpec>,
    #[serde(default)]
    pub direction: Direction,
    pub payload: serde_json::Value,
}

#[derive(Clone, Debug)]
pub enum Operator {
    Shift(ShiftOperator),
    Matrix(MatrixOp),
}

impl OperatorConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn shift(label: &str, weights: &WeightSequence, space: SpaceSpec, direction: Direction) -> Result<Self> {
        Ok(OperatorConfig {
            label: label.into(),
            kind: OperatorKind::Shift,
            space: Some(space),
            direction,
            payload: serde_json::to_value(weights)?,
        })
    }

    pub fn matrix(label: &str, op: &MatrixOp) -> Result<Self> {
        Ok(OperatorConfig {
            label: label.into(),
            kind: OperatorKind::Matrix,
            space: None,
            direction: Direction::Forward,
            payload: serde_json::to_value(op)?,
        })
    }

    /// Runs the payload through its constructor.
    pub fn build(&self) -> Result<Operator> {
        match self.kind {
            OperatorKind::Shift => {
                let space = self.space.ok_or_else(|| Error::InvalidArgument("shift config needs a space".into()))?;
                let w: WeightSequence = serde_json::from_value(self.payload.clone())?;
                Ok(Operator::Shift(ShiftOperator::new(w, self.direction, space)))
            }
            OperatorKind::Matrix => Ok(Operator::Matrix(serde_json::from_value(self.payload.clone())?)),
        }
    }
}
