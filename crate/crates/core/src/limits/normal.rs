/// The classical standard normal CDF, `erfc(-x / sqrt 2) / 2`.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}
