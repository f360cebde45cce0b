//! Markov chain samplers for weighted matroid independent sets, connected
//! spanning subgraphs (all-terminal network reliability) and random cluster
//! models with `0 <= q <= 1`.
//!
//! The independent-set sampler runs a down-up walk on a polarized lift of the
//! target distribution: the state is an independent set `A` padded with
//! `n - |A|` auxiliary slots. Each transition drops a uniform element and then
//! re-adds one by rejection sampling against an incremental independence
//! oracle, so a transition costs `O(log n)` plus a constant expected number of
//! oracle calls.
//!
//! ```
//! use matroid_mcmc::{ChainConfig, Fields, MatroidSpec, PolarizedChain};
//!
//! let spec = MatroidSpec::Uniform { n: 4, k: 2 };
//! let fields = Fields::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
//! let cfg = ChainConfig { seed: 7, ..ChainConfig::default() };
//! let mut chain = PolarizedChain::new(&spec, fields, cfg).unwrap();
//! let sample = chain.run();
//! assert!(sample.len() <= 2);
//! ```

pub mod batch;
pub mod chain;
pub mod dyncon;
mod error;
pub mod exact;
pub mod io;
pub mod matroid;
pub mod reliability;
pub mod scaling;
pub mod weighted;

pub use chain::cluster::RandomClusterChain;
pub use chain::polarized::{DropClass, PolarizedChain};
pub use chain::{ChainConfig, Sampler, StepStats};
pub use dyncon::{ConnectivityBackend, DynGraph, DynamicConnectivity, EdgeHandle, NaiveDynGraph};
pub use error::{Error, Result};
pub use matroid::{build_oracle, build_oracle_with, Fields, GroundSet, IncrementalOracle, MatroidSpec, OracleKind};
pub use reliability::{EstimateConfig, NetworkInstance, ReliabilityEstimate};
pub use weighted::WeightedIndex;
