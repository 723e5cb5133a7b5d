//! Groupoid actions on étale sheaves, r-structures and s-transports.

mod action;
mod qpair;
mod sweep;
mod transport;

pub use action::{check_continuity, enumerate_actions, validate_action, GroupoidAction};
pub use qpair::{germs_over, lift_r_action, q_pair_check, q_pairs, q_pairs_over, quotient_space, r_structure_check, r_structures, QPair};
pub use transport::{enumerate_transports, is_locally_transitive, s_transport_check, transport_charts, unique_transport, TransportCount};
pub use sweep::{transport_sweep, TransportSweep};
