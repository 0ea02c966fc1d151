//! Core algorithms for extracting SNP–phenotype associations from
//! sentence-annotated biomedical abstracts.
//!
//! The crate is `no_std` (with `alloc`) and contains no IO. It covers:
//!
//! * [`textproc`]: tokenization, clause segmentation and lexicon-driven
//!   entity recognition.
//! * [`negation`]: negation cue detection and clause-bounded scope resolution.
//! * [`features`]: the six positional negation features and the sparse
//!   context features used by the neutral detector and kernel baselines.
//! * [`svm`], [`kernel`], [`tree`], [`ovr`], [`bow`]: an SMO-trained kernel
//!   SVM with global-context, local-context and subtree kernels.
//! * [`nnb`]: the negation/neutral rule classifier and the end-to-end extractor.
//! * [`confidence`]: modality and p-value based confidence levels.
//! * [`metrics`] and [`cv`]: scoring, fold planning and cross-validation.
//!
//! The companion `snpassoc` crate adds file formats and the command line.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bow;
pub mod confidence;
pub mod corpus;
pub mod cv;
pub mod error;
pub mod features;
pub mod kernel;
pub mod lexicon;
pub mod metrics;
pub mod negation;
pub mod nnb;
pub mod ovr;
pub mod pipeline;
pub mod span;
pub mod svm;
pub mod textproc;
pub mod tree;

pub use error::{Error, Result};
pub use span::{Span, TokenRange};
