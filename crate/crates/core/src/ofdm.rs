//! OFDM baseband symbol generation: unitary IDFT modulation of
//! frequency-domain subcarrier symbols and its inverse.
//!
//! The transform pair uses the 1/sqrt(N) normalization on both sides, so
//! modulation preserves signal energy. Only power-of-two lengths are
//! supported. The waveform is decoupled from the RSS pipeline, which works
//! on scalar dB levels.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Subcarrier count from the default simulation parameters.
pub const DEFAULT_SUBCARRIERS: usize = 64;

/// Wi-Fi-like subcarrier spacing (Hz); informational only.
pub const DEFAULT_SUBCARRIER_SPACING_HZ: f64 = 312_500.0;

/// Frequency-domain data symbols, one complex value per subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct SubcarrierSymbols {
    pub values: Vec<Complex64>,
}

impl SubcarrierSymbols {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One sampled time-domain OFDM symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDomainSymbol {
    pub samples: Vec<Complex64>,
    /// Symbol duration T_s = 1 / subcarrier_spacing (s).
    pub symbol_duration: f64,
    /// Subcarrier spacing (Hz).
    pub subcarrier_spacing: f64,
}

impl TimeDomainSymbol {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn check_length(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::UnsupportedLength(n));
    }
    Ok(())
}

/// Modulates subcarrier symbols into a time-domain symbol with the default
/// subcarrier spacing.
pub fn ofdm_modulate(symbols: &SubcarrierSymbols) -> Result<TimeDomainSymbol> {
    ofdm_modulate_with_spacing(symbols, DEFAULT_SUBCARRIER_SPACING_HZ)
}

/// Modulates subcarrier symbols: samples are the unitary inverse DFT
/// `x(n) = (1/sqrt(N)) * sum_k X(k) * exp(j*2*pi*n*k/N)`.
pub fn ofdm_modulate_with_spacing(
    symbols: &SubcarrierSymbols,
    subcarrier_spacing: f64,
) -> Result<TimeDomainSymbol> {
    let n = symbols.len();
    check_length(n)?;
    if !subcarrier_spacing.is_finite() || subcarrier_spacing <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "subcarrier spacing must be > 0, got {subcarrier_spacing}"
        )));
    }

    let mut samples = symbols.values.clone();
    FftPlanner::new().plan_fft_inverse(n).process(&mut samples);
    let scale = 1.0 / (n as f64).sqrt();
    for s in &mut samples {
        *s *= scale;
    }

    Ok(TimeDomainSymbol {
        samples,
        symbol_duration: 1.0 / subcarrier_spacing,
        subcarrier_spacing,
    })
}

/// Recovers subcarrier symbols from a time-domain symbol (unitary forward
/// DFT); inverse of [`ofdm_modulate`].
pub fn ofdm_demodulate(symbol: &TimeDomainSymbol) -> Result<SubcarrierSymbols> {
    let n = symbol.len();
    check_length(n)?;

    let mut values = symbol.samples.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut values);
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut values {
        *v *= scale;
    }

    Ok(SubcarrierSymbols { values })
}

/// Total energy of a time-domain symbol, `sum |x(n)|^2`.
pub fn symbol_energy(symbol: &TimeDomainSymbol) -> f64 {
    symbol.samples.iter().map(|s| s.norm_sqr()).sum()
}
