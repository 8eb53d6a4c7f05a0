//! The bundled example corpus.

use crate::input::{parse_input, InputFile};

pub const CORPUS_JSON: &str = include_str!("../data/corpus.json");

pub fn corpus() -> InputFile {
    parse_input("built-in corpus", CORPUS_JSON).expect("bundled corpus parses")
}
