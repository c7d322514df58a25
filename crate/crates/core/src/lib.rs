//! Braids, closures, Seifert forms and certified cobordism bookkeeping.

pub mod alexander;
pub mod ball;
pub mod braid;
pub mod cert;
pub mod garside;
pub mod replication;
pub mod seifert;
pub mod signature;

pub use braid::{cable2, make_word, BraidError, BraidWord, Permutation};
pub use garside::{equal, normal_form, CanonicalBraid};
pub use seifert::{seifert_matrix, SeifertMatrix};
