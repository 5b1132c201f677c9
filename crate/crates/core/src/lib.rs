//! AMR-driven semantic bridging across documents and multi-hop QA synthesis.

pub mod amr;
pub mod bridging;
pub mod corpus;
pub mod frames;
pub mod generation;
pub mod http;
pub mod metrics;
pub mod quality;
pub mod scoring;
pub mod synth;
pub mod pipeline;
