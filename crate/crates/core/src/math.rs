//! Thin wrappers over `libm` so the crate stays `no_std`.

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `|x|^q`, with `0^q = 0` for every `q > 0`.
#[inline]
pub fn abs_pow(x: f64, q: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        0.0
    } else if q == 1.0 {
        a
    } else if q == 2.0 {
        a * a
    } else {
        powf(a, q)
    }
}
