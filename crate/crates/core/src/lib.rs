//! Compiles quantum Turing machines into finitely generated quantum circuit
//! families and checks that both produce the same measurement statistics.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circsim;
pub mod decompose;
pub mod numerics;
pub mod qtm;
pub mod yao;
