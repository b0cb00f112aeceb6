//! Sup-norm certification of vacuum static pairs with harmonic curvature,
//! tensor identity checks, and classification.
//!
//! Every identity is checked multiplied through by `f` so that zeros of the
//! lapse or of `f'` cause no division.

mod classify;
mod residual;

pub use classify::{classify, classify_with, verify_and_classify, ClassifyOptions, Label, TypeLabel};
pub use residual::{
    check_lemma41, harmonic_residual, identity_db, identity_dcw, integrability_residual,
    static_residual, verify, ChannelValue, HarmonicChannels, Lemma41Channels, ResidualReport,
    StaticChannels, Tier, DB_TOLERANCE, DEFAULT_GAP,
};
