//! Van Kampen diagrams over a zoo of finite presentations: build them, check them,
//! cut and reglue them, and measure how far their vertices sit from the base.

pub mod cayley;
pub mod cli;
pub mod constructions;
pub mod corridors;
pub mod diagram;
pub mod error;
pub mod metrics;
pub mod models;
pub mod presentation;
pub mod render;
pub mod word;

pub use diagram::{Diagram, Surface};
pub use error::{Error, Result};
pub use presentation::{build_presentation, retraction, Family, Presentation, Retraction};
pub use word::{Alphabet, Letter, LetterMap, Word};
