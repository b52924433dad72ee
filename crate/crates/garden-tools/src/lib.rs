//! IO companion to `garden-core`: file formats, benchmark protocols,
//! manifests, and the `garden` CLI binary.

#![deny(unsafe_code)]

pub mod bench;
pub mod formats;
pub mod manifest;
pub mod plot;
pub mod timer;
