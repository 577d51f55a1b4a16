//! Serializable result types for the structured output format.
//!
//! One self-describing document per invocation, decimal strings for all
//! numerics (field order is fixed by the struct definitions, so identical
//! inputs serialize byte-identically).

use crate::num::ComplexBall;
use crate::tower::{Tower, WitnessKind};
use crate::zero::{RewriteStep, ZeroVerdict};
use serde::Serialize;

pub const FORMAT_VERSION: &str = "elnum/1";

/// Enclosure in decimal form.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BallRepr {
    pub mid_re: String,
    pub mid_im: String,
    pub radius: String,
    pub precision_bits: u32,
}

impl BallRepr {
    pub fn from_ball(ball: &ComplexBall, precision_bits: u32) -> Self {
        let digits = (precision_bits as f64 * 0.302).ceil() as usize + 2;
        let (mid_re, mid_im, radius) = ball.to_decimal_parts(digits);
        BallRepr {
            mid_re,
            mid_im,
            radius,
            precision_bits,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerEntryRepr {
    pub alpha: String,
    pub m: u64,
    pub witness_kind: String,
    pub witness: String,
    pub both_hold: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerRepr {
    pub entries: Vec<TowerEntryRepr>,
    pub target: Option<String>,
}

impl TowerRepr {
    pub fn from_tower(t: &Tower) -> Self {
        TowerRepr {
            entries: t
                .entries
                .iter()
                .map(|e| TowerEntryRepr {
                    alpha: crate::expr::render(&e.alpha),
                    m: e.m,
                    witness_kind: match e.witness_kind {
                        WitnessKind::PowerInBase => "power_in_base".to_string(),
                        WitnessKind::ExpInBase => "exp_in_base".to_string(),
                    },
                    witness: crate::tower::witness_text(&e.witness),
                    both_hold: e.both_hold,
                })
                .collect(),
            target: t.target.as_ref().map(crate::tower::witness_text),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RewriteStepRepr {
    pub rule: String,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VerdictRepr {
    Nonzero { certificate: BallRepr },
    Zero { derivation: Vec<RewriteStepRepr> },
    Unknown {
        max_precision_bits: u32,
        rewrite_passes: u32,
        diagnostic: Option<String>,
    },
}

impl VerdictRepr {
    pub fn from_verdict(v: &ZeroVerdict, precision_bits: u32) -> Self {
        match v {
            ZeroVerdict::Nonzero { certificate } => VerdictRepr::Nonzero {
                certificate: BallRepr::from_ball(certificate, precision_bits),
            },
            ZeroVerdict::Zero { derivation } => VerdictRepr::Zero {
                derivation: derivation.iter().map(step_repr).collect(),
            },
            ZeroVerdict::Unknown {
                max_precision_bits,
                rewrite_passes,
                diagnostic,
            } => VerdictRepr::Unknown {
                max_precision_bits: *max_precision_bits,
                rewrite_passes: *rewrite_passes,
                diagnostic: diagnostic.clone(),
            },
        }
    }
}

fn step_repr(s: &RewriteStep) -> RewriteStepRepr {
    RewriteStepRepr {
        rule: s.rule.to_string(),
        before: s.before.clone(),
        after: s.after.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationRepr {
    pub coefficients: Vec<i64>,
    pub height: u64,
    pub status: String,
    pub height_bound: u32,
    pub precision_bits: u32,
    pub diagnostic: Option<String>,
}
