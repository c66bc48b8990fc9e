//! Exact classes `[V/G]` in the Grothendieck ring of varieties for linear
//! actions of finite abelian groups over number fields, together with the
//! arithmetic and point-counting oracles used to cross-check them.

pub mod exact;
pub mod repgroup;
pub mod kring;
pub mod oracle;
pub mod quotient;
pub mod cli;
