//! Computations around the Brauer-Manin obstruction to weak approximation at
//! primes of good reduction.
//!
//! The crate covers the full desk-scale pipeline: exact arithmetic in small
//! finite fields, point counting and ordinarity of K3 reductions, exact
//! p-adic arithmetic with Hilbert symbols and Hensel lifting, evaluation of
//! quaternion symbol algebras at p-adic points of quartic surfaces, Cartier
//! calculus on differential forms in characteristic p, the Swan-conductor
//! filtration with refined-Swan-conductor data, and the descent pipeline for
//! Kummer surfaces attached to products of elliptic curves.
//!
//! The primary interface is the `examples/` directory: one runnable program
//! per capability.
//!
//! ```text
//! examples/
//! ├── ordinarity.rs            # point counts and the ordinarity criterion
//! ├── hilbert_symbols.rs       # formula vs brute-force isotropy oracle
//! ├── lift_and_evaluate.rs     # Hensel lifting + evaluation scans over Q_2
//! ├── cartier_forms.rs         # chart 2-forms, Cartier operator, classification
//! ├── swan_filtration.rs       # filtration levels, rsw pairs, verdict engine
//! ├── kummer_descent.rs        # two-torsion, Legendre form, descent matrix
//! └── tame_residues.rs         # residues of quaternion symbols along divisors
//! ```
//!
//! Run one with `cargo run --release --example ordinarity`.
//!
//! A thin command-line binary (`wildbrauer`) exposes the same operations as
//! subcommands; see the README for the command set, including the pinned
//! `reproduce` scenarios.

pub mod brauer;
pub mod cli;
pub mod finite_field;
pub mod forms;
pub mod fpoly;
pub mod kummer;
pub mod padic;
pub mod ratpoly;
pub mod scenarios;
pub mod surface;
pub mod swan;
