//! Toeplitz operators with radial symbols: their spectral sequences,
//! closed forms and spectral diagnostics.

mod closed;
mod diagnostics;
mod gamma;
mod symbol;

pub use closed::{closed_form_chirp, closed_form_chirp_shifted, closed_form_indicator, closed_form_power};
pub use diagnostics::*;
pub use gamma::{gamma_sequence, SpectralSequence, CHIRP_MAX_ORDER};
pub use symbol::{ClosedFormTag, DecayTag, ProfileFn, RadialSymbol, SymbolKind};
