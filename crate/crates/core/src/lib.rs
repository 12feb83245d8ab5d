//! Simulator and toolchain for a message-programmed reconfigurable fabric.
//!
//! A fabric is a torus of compute sites. Each site holds one `f32` and is
//! programmed by 64-bit messages that also carry operands. The crate covers
//! the message format ([`isa`]), a cycle-stepped simulator ([`fabric`]),
//! schedule builders for matrix-vector products and PageRank ([`kernel`]),
//! graph-level PageRank drivers ([`pagerank`]) and a closed-form cost model
//! ([`perf`]).
//!
//! ```
//! use meshfab::fabric::{Fabric, FabricConfig};
//! use meshfab::kernel::{build_matvec, Matrix};
//!
//! let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
//! let cfg = FabricConfig::new(4, 4).unwrap();
//! let sched = build_matvec(&a, &[1.0, 1.0], &cfg).unwrap();
//! let out = Fabric::new(cfg).unwrap().run(&sched).unwrap();
//! assert_eq!(out.output_vector(2).unwrap(), vec![3.0, 7.0]);
//! assert_eq!(out.timesteps, 2 + 3);
//! ```

pub mod fabric;
pub mod isa;
pub mod kernel;
pub mod pagerank;
pub mod perf;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/message-format.md")]
    mod message_format {}
    #[doc = include_str!("../../../book/src/fabric.md")]
    mod fabric {}
    #[doc = include_str!("../../../book/src/scheduling.md")]
    mod scheduling {}
    #[doc = include_str!("../../../book/src/pagerank.md")]
    mod pagerank {}
    #[doc = include_str!("../../../book/src/performance.md")]
    mod performance {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
