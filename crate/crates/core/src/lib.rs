//! Building, validating and using LSA-style semantic spaces.
//!
//! * [`corpusio`] turns raw text into stratified paragraph streams.
//! * [`vecspace`] builds the term × paragraph matrix, weights it and reduces it
//!   with a truncated SVD.
//! * [`evalsuite`] runs behavioral-data protocols against a space.
//! * [`cooctrace`] replays corpus growth and attributes similarity gains to
//!   occurrence and co-occurrence categories.
//! * [`cimodel`] simulates construction-integration text comprehension.

pub mod cimodel;
pub mod cooctrace;
pub mod corpusio;
pub mod evalsuite;
pub mod synth;
pub mod vecspace;
