pub mod cyclo;
pub mod eisenstein;
pub mod error;
pub mod hopf;
pub mod json;
pub mod numerics;
pub mod products;
pub mod qseries;
pub mod relations;
pub mod words;
