//! Computational toolkit for the braid groups of the 2-sphere: word problem
//! and torsion, finite subgroups, amalgams over index-two subgroups, and the
//! virtually cyclic subgroup classification with braid-word witnesses.

pub mod amalgams;
pub mod braid_words;
pub mod cli_verifier;
pub mod finite_groups;
pub mod sphere_oracle;
pub mod vc_classifier;
