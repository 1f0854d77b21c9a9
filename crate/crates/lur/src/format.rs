//! Deterministic output helpers: fixed-precision floats and input digests.
//!
//! Reports round every float to 12 significant digits before serialization so
//! identical runs produce byte-identical output regardless of platform float
//! formatting quirks.

/// Round to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal rendering of the 12-significant-digit rounding.
pub fn fmt_sig12(x: f64) -> String {
    let r = sig12(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

/// FNV-1a 64-bit digest, hex encoded. Used to tag reports with a fingerprint
/// of the exact input they were computed from.
pub fn digest(bytes: &[u8]) -> String {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(PRIME);
    }
    format!("{hash:016x}")
}
