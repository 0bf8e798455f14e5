//! Built-in models shipped with the crate.

use crate::model_io::{parse_model_file, ModelFile};

pub const M11: &str = include_str!("../models/m11.sul");
pub const APPENDIX_A: &str = include_str!("../models/appendix_a.sul");
pub const S3: &str = include_str!("../models/s3.sul");
pub const CP2: &str = include_str!("../models/cp2.sul");
pub const LIE_RANK2: &str = include_str!("../models/lie_rank2.sul");

/// Name and source of every shipped model.
pub const ALL: [(&str, &str); 5] = [
    ("m11", M11),
    ("appendix_a", APPENDIX_A),
    ("s3", S3),
    ("cp2", CP2),
    ("lie_rank2", LIE_RANK2),
];

pub fn load(name: &str) -> Option<ModelFile> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, src)| parse_model_file(src).expect("shipped model parses"))
}

pub fn m11() -> ModelFile {
    load("m11").unwrap()
}

pub fn appendix_a() -> ModelFile {
    load("appendix_a").unwrap()
}

pub fn s3() -> ModelFile {
    load("s3").unwrap()
}

pub fn cp2() -> ModelFile {
    load("cp2").unwrap()
}

pub fn lie_rank2() -> ModelFile {
    load("lie_rank2").unwrap()
}
