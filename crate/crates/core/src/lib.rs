//! Computer-algebra kernel for exp-log closed-form numbers.
//!
//! The library builds expressions from rationals, field operations, `exp`,
//! and principal-branch `log`; evaluates them to rigorous complex
//! enclosures; organizes them into towers with constructive witnesses;
//! detects integer relations among constants; recognizes zero three-valuedly
//! (certified nonzero, certified zero, or honestly unknown); and runs the
//! desk-scale experiments around the open questions this calculus raises.

pub mod eval;
pub mod zero;
pub mod exact;
pub mod expr;
pub mod fieldelem;
pub mod lab;
pub mod linrel;
pub mod num;
pub mod report;
pub mod tower;
