//! Choreographic programming toolkit: Core Choreographies, Stateful
//! Processes, endpoint projection, amendment, and bounded checkers for the
//! correspondence between a choreography and its amendment or projection.

pub mod amend;
pub mod cc;
pub mod corpus;
pub mod expr;
pub mod ident;
pub mod label;
pub mod lts;
pub mod projection;
pub mod sp;
pub mod state;
pub mod syntax;
pub mod verify;

pub use amend::{add_sels, amend, amend_defs, amend_program, sel_exp_check, up_list};
pub use cc::{
    cc_enabled, cc_pn, cc_traces, cc_wf, program_wf, CcSystem, CcTransition, ChorConfig,
    ChorProgram, Choreography, DefSet, Eta, Procedure,
};
pub use expr::{beval, eval, BExpr, Expr};
pub use ident::{Label, Pid, RecVar, Var};
pub use label::TransitionLabel;
pub use projection::{bproj, epp, merge, projectable_dec, projectable_list};
pub use sp::{
    network_compose, network_remove, network_singleton, network_wf, sp_enabled, sp_traces,
    Behaviour, DefSetB, NetConfig, Network, SpProgram, SpSystem,
};
pub use state::State;
