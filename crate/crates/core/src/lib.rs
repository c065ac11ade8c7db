//! Exact-arithmetic analysis of tableaux of PDE symbols: Cartan characters,
//! prolongations, Cartan's test, and the endovolutive (linear) and commutator
//! (quadratic) criteria for involutivity, together with the normal-form
//! structures `W^-_i`, `W^1(φ)`, `B(φ)(v)` and tools for sampling the variety
//! of involutive symbols.

pub mod document;
pub mod error;
pub mod guillemin;
pub mod involutivity;
pub mod matrix;
pub mod moduli;
pub mod rational;
pub mod subspace;
pub mod tableau;

pub use document::TableauDocument;
pub use error::{Error, ParseRationalError, Result};
pub use guillemin::{
    b_of_phi, check_gnf_commutativity, check_theorem_a, dim_w1_generic, w1_of_phi, w_minus, w_plus, Covector,
};
pub use involutivity::{
    build_b_array, cartan_test, is_endovolutive, prolongation_dimension, quadratic_criterion,
    search_endovolutive_basis, BArray, CartanOptions, InvolutivityReport, QuadraticViolation, Variant,
};
pub use matrix::RatMatrix;
pub use moduli::{enumerate_census, export_ideal, sample_involutive, Census, IdealGenerator, Poly, SampleOptions};
pub use rational::Rational;
pub use subspace::Subspace;
pub use tableau::{
    characters_in_basis, extract_symbol_coefficients, find_generic_basis, tableau_from_coefficients, BasisPair,
    CartanCharacters, CoefficientKey, SymbolPresentation, Tableau,
};
