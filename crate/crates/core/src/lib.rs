pub mod analytic;
pub mod blackjack;
pub mod circuit;
pub mod classical;
pub mod cli;
pub mod error;
pub mod explorer;
pub mod game;
pub mod hyperbit;
pub mod qsim;
pub mod solution;
pub mod solve;
