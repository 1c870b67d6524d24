//! Exact solver for signaling games where the receiver only observes which
//! pattern (block of a partition of the sender's types) it is facing.
//!
//! All arithmetic is over [`Rational`]. The pipeline runs receiver best
//! responses ([`receiver`]), sender best responses and optimal message sets
//! ([`sender`]), belief updates ([`bayes`]) and equilibrium search
//! ([`equilibrium`]). [`oracle`] holds slow brute-force references used in
//! tests; [`cartrade`] builds the second-hand car trade example.

pub mod bayes;
pub mod cartrade;
pub mod equilibrium;
pub mod game;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod receiver;
pub mod scenario;
pub mod sender;

pub use bayes::{
    conditional_message_dist, incentive_patterns, posterior, posterior_profile,
    ConditionalMessageDist, PosteriorOutcome, PosteriorProfile,
};
pub use equilibrium::{
    classify, enumerate_equilibria, enumerate_equilibria_with, supporting_belief,
    verify_equilibrium, Classification, Equilibrium, EquilibriumError, VerificationReport,
};
pub use game::{
    discrete_partition, make_partition, validate_game, GameDefinition, GameError, PatternPartition,
    PatternPrior, PayoffTable, ReceiverStrategy, SenderStrategy, SignalingGame, TypeSpace,
    ValidationReport,
};
pub use rational::{rat, Rational, RationalError};
pub use receiver::{
    belief_intervals, best_actions, receiver_objective, worst_case_payoff, Belief, BestActions,
};
pub use scenario::{parse_game_file, render_game, ParseError, ScenarioError};
pub use sender::{
    enumerate_selections, enumerate_selections_with, optimal_message_set, type_best_messages,
    MessageSet, MessageSetRule, SelectionProfile, TypeBestResponse,
};
