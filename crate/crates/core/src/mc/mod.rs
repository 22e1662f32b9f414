//! Sum-over-trees construction of the consistent diagram.

pub mod assemble;
pub mod cone;
pub mod trees;

pub use assemble::{assemble_wall_factors, verify_against_ks, Coefficient, EvalOptions, VerifyReport, WallFactors};
pub use cone::{cone_of_tree, gaussian_cone_measure, gaussian_cone_measure_on_stream, Cone, Measure, Method};
pub use trees::{enumerate_trees, propagate, InputPair, LabeledTree, Leaf, Tree, TreeLabels, TreeWall};
