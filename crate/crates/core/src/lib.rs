//! Two-party communication protocols for vertex and edge coloring.

pub mod edge;
pub mod error;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod io;
pub mod runtime;
pub mod slackint;
pub mod verify;
pub mod vertex;
pub mod zec;

pub use error::{GraphError, ProtocolError};
pub use generate::{gen_c4_gadget_instance, gen_random_instance, gen_zec_product_instance, Model, PartitionStrategy};
pub use graph::{build_graph, EdgePartition, Graph, Party};
pub use harness::{cmd_bench, cmd_run, run_one, ExperimentConfig, HarnessError, Problem, RunReport};
pub use runtime::{run_protocol, Channel, PublicCoins, RuntimeConfig, Transcript};
pub use verify::{verify_edge_coloring, verify_vertex_coloring, EdgeColoring, VertexColoring, Violation};
pub use zec::{build_label_table, find_failure_witness, product_game_estimate, zec_win_probability, ZecStrategy};
