//! Shared vocabulary types: transform shapes, precisions, transform kinds,
//! memory modes, radix classes and the size accounting derived from them.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid extents '{0}': {1}")]
    InvalidExtents(String, String),
    #[error("element count overflows 64-bit range for extents {0}")]
    CountOverflow(String),
    #[error("byte count overflows 64-bit range for extents {0}")]
    ByteOverflow(String),
}

/// Transform shape: 1 to 3 positive lengths, slowest-varying first.
///
/// The last (fastest-varying) length is the one halved by Hermitian packing
/// of a real transform. Unit-length axes are rejected for rank > 1; a shape
/// like (n,1,1) must be expressed as the rank-1 shape (n,).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extents {
    dims: Vec<u64>,
}

impl Extents {
    pub fn new(dims: &[u64]) -> Result<Self, ModelError> {
        let text = || {
            dims.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("x")
        };
        if dims.is_empty() || dims.len() > 3 {
            return Err(ModelError::InvalidExtents(
                text(),
                format!("rank must be 1..=3, got {}", dims.len()),
            ));
        }
        if dims.contains(&0) {
            return Err(ModelError::InvalidExtents(
                text(),
                "every length must be >= 1".into(),
            ));
        }
        if !dims.iter().any(|&d| d >= 2) {
            return Err(ModelError::InvalidExtents(
                text(),
                "at least one length must be >= 2".into(),
            ));
        }
        if dims.len() > 1 && dims.contains(&1) {
            return Err(ModelError::InvalidExtents(
                text(),
                "unit axes are not allowed above rank 1; drop them and lower the rank".into(),
            ));
        }
        let mut product: u64 = 1;
        for &d in dims {
            product = product
                .checked_mul(d)
                .ok_or_else(|| ModelError::CountOverflow(text()))?;
        }
        Ok(Self {
            dims: dims.to_vec(),
        })
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    /// Fastest-varying length (the one Hermitian packing halves).
    pub fn last(&self) -> u64 {
        *self.dims.last().expect("extents are never empty")
    }
}

impl fmt::Display for Extents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.dims {
            if !first {
                write!(f, "x")?;
            }
            write!(f, "{d}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Extents {
    type Err = ModelError;

    /// Parses the text form "n1xn2xn3", e.g. "128x128x128". Case sensitive,
    /// no whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut dims = Vec::new();
        for part in s.split('x') {
            let n: u64 = part.parse().map_err(|_| {
                ModelError::InvalidExtents(s.to_string(), format!("bad length '{part}'"))
            })?;
            dims.push(n);
        }
        Extents::new(&dims)
    }
}

/// IEEE floating point width of the signal data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    /// Token used in case ids, filters and the CSV ("float" / "double").
    pub fn token(self) -> &'static str {
        match self {
            Precision::Single => "float",
            Precision::Double => "double",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "float" => Some(Precision::Single),
            "double" => Some(Precision::Double),
            _ => None,
        }
    }

    /// Bytes per real scalar.
    pub fn real_bytes(self) -> u64 {
        match self {
            Precision::Single => 4,
            Precision::Double => 8,
        }
    }

    /// Bytes per complex element (two scalars).
    pub fn complex_bytes(self) -> u64 {
        self.real_bytes() * 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    RealToComplex,
    ComplexToComplex,
}

impl TransformKind {
    pub fn token(self) -> &'static str {
        match self {
            TransformKind::RealToComplex => "Real",
            TransformKind::ComplexToComplex => "Complex",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "Real" => Some(TransformKind::RealToComplex),
            "Complex" => Some(TransformKind::ComplexToComplex),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MemoryMode {
    InPlace,
    OutOfPlace,
}

impl MemoryMode {
    pub fn token(self) -> &'static str {
        match self {
            MemoryMode::InPlace => "Inplace",
            MemoryMode::OutOfPlace => "Outplace",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "Inplace" => Some(MemoryMode::InPlace),
            "Outplace" => Some(MemoryMode::OutOfPlace),
            _ => None,
        }
    }
}

/// Transform direction. Forward uses exponent sign -1, inverse +1; inverse
/// transforms are unnormalized throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    /// Sign of the exponent in e^(sign * 2*pi*i*j*k/n).
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        }
    }
}

/// Shape class by prime content of the lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadixClass {
    PowerOfTwo,
    Radix357,
    OddShape,
}

impl RadixClass {
    pub fn token(self) -> &'static str {
        match self {
            RadixClass::PowerOfTwo => "powerof2",
            RadixClass::Radix357 => "radix357",
            RadixClass::OddShape => "oddshape",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "powerof2" => Some(RadixClass::PowerOfTwo),
            "radix357" => Some(RadixClass::Radix357),
            "oddshape" => Some(RadixClass::OddShape),
            _ => None,
        }
    }
}

/// Planning-effort hint forwarded to backends. The built-in clients ignore
/// it; adapters for libraries with plan rigors map it onto theirs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PlanEffort {
    None,
    #[default]
    Estimate,
    Measure,
}

impl PlanEffort {
    pub fn token(self) -> &'static str {
        match self {
            PlanEffort::None => "none",
            PlanEffort::Estimate => "estimate",
            PlanEffort::Measure => "measure",
        }
    }
}

fn is_smooth_2357(mut n: u64) -> bool {
    for p in [2u64, 3, 5, 7] {
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n == 1
}

/// Classifies a shape by the prime factors of its lengths: `powerof2` when
/// every length is a power of two, `radix357` when every length is
/// {2,3,5,7}-smooth and at least one is not a power of two, `oddshape`
/// otherwise. Total over valid extents.
pub fn classify_radix(extents: &Extents) -> RadixClass {
    let all_pow2 = extents.dims().iter().all(|&d| d.is_power_of_two());
    if all_pow2 {
        return RadixClass::PowerOfTwo;
    }
    if extents.dims().iter().all(|&d| is_smooth_2357(d)) {
        RadixClass::Radix357
    } else {
        RadixClass::OddShape
    }
}

/// Product of the lengths. The constructor already guarantees the product
/// fits, so this cannot fail for a valid `Extents`.
pub fn total_elements(extents: &Extents) -> u64 {
    extents.dims().iter().product()
}

/// Element count of the Hermitian-packed half spectrum: the fastest axis is
/// cut to floor(n/2)+1 bins, the others stay.
pub fn packed_elements(extents: &Extents) -> u64 {
    let dims = extents.dims();
    let mut count = dims.last().unwrap() / 2 + 1;
    for &d in &dims[..dims.len() - 1] {
        count *= d;
    }
    count
}

/// Signal storage for one transform as a pair (input bytes, output bytes).
///
/// Real input elements take 4 or 8 bytes by precision, complex twice that.
/// Real-to-complex output holds the packed half spectrum. In-place mode
/// reports output bytes = 0: storage is shared with the input allocation,
/// which is padded to max(input, output).
pub fn signal_bytes(
    extents: &Extents,
    precision: Precision,
    kind: TransformKind,
    mode: MemoryMode,
) -> Result<(u64, u64), ModelError> {
    let overflow = || ModelError::ByteOverflow(extents.to_string());
    let n = total_elements(extents);
    let (in_bytes, out_bytes) = match kind {
        TransformKind::ComplexToComplex => {
            let b = n
                .checked_mul(precision.complex_bytes())
                .ok_or_else(overflow)?;
            (b, b)
        }
        TransformKind::RealToComplex => {
            let in_b = n.checked_mul(precision.real_bytes()).ok_or_else(overflow)?;
            let out_b = packed_elements(extents)
                .checked_mul(precision.complex_bytes())
                .ok_or_else(overflow)?;
            (in_b, out_b)
        }
    };
    Ok(match mode {
        MemoryMode::OutOfPlace => (in_bytes, out_bytes),
        MemoryMode::InPlace => (in_bytes.max(out_bytes), 0),
    })
}

/// Bytes of the logical time-domain signal, i.e. the payload moved by one
/// upload or one download. Independent of memory mode.
pub fn transfer_bytes(
    extents: &Extents,
    precision: Precision,
    kind: TransformKind,
) -> Result<u64, ModelError> {
    let n = total_elements(extents);
    let per = match kind {
        TransformKind::RealToComplex => precision.real_bytes(),
        TransformKind::ComplexToComplex => precision.complex_bytes(),
    };
    n.checked_mul(per)
        .ok_or_else(|| ModelError::ByteOverflow(extents.to_string()))
}
