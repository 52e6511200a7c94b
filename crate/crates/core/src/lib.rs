#![no_std]

extern crate alloc;

pub mod genfunc;
pub mod grid;
pub mod harness;
pub mod invariant;
pub mod kdf;
pub mod modmath;
pub mod oscillator;
pub mod protocol;
