use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `wins` successes out of `games` at normal
/// quantile `z`.
pub fn wilson_interval(wins: u64, games: u64, z: f64) -> Result<(f64, f64)> {
    if games == 0 {
        return Err(Error::InvalidParameter("Wilson interval of zero games".into()));
    }
    if wins > games {
        return Err(Error::InvalidParameter(format!("{wins} wins out of {games} games")));
    }
    let n = games as f64;
    let p = wins as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = ((center - spread) / denom).max(0.0);
    let hi = ((center + spread) / denom).min(1.0);
    Ok((if wins == 0 { 0.0 } else { lo }, if wins == games { 1.0 } else { hi }))
}
