//! Value lists, ranges and parameter products.

use super::expr::eval_real;

/// One parameter slot: `expr`, `expr|expr|…`, or `start:stop:count`.
pub fn parse_values(src: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = src.split(':').collect();
    match parts.as_slice() {
        [single] => single.split('|').map(|s| eval_real(s.trim())).collect(),
        [a, b, count] => {
            let (a, b) = (eval_real(a.trim())?, eval_real(b.trim())?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| format!("bad count in range `{src}`"))?;
            if count == 0 {
                return Err(format!("empty range `{src}`"));
            }
            if count == 1 {
                return Ok(vec![a]);
            }
            Ok((0..count)
                .map(|k| {
                    if k == count - 1 {
                        b
                    } else {
                        a + (b - a) * k as f64 / (count - 1) as f64
                    }
                })
                .collect())
        }
        _ => Err(format!("range `{src}` must be start:stop:count")),
    }
}

/// Comma-separated slots, expanded to their Cartesian product in row-major
/// order (last slot fastest).
pub fn parse_params(src: &str) -> Result<Vec<Vec<f64>>, String> {
    if src.trim().is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let slots = src.split(',').map(parse_values).collect::<Result<Vec<_>, _>>()?;
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for slot in &slots {
        out = out
            .iter()
            .flat_map(|prefix| {
                slot.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    Ok(out)
}

/// Chain lengths: comma-separated `n`, `lo:hi` (every integer) or
/// `lo:hi:count` (geometric spacing, rounded and deduplicated).
pub fn parse_lengths(src: &str) -> Result<Vec<usize>, String> {
    let int = |s: &str| -> Result<usize, String> { s.trim().parse().map_err(|_| format!("bad chain length `{s}`")) };
    let mut out = Vec::new();
    for item in src.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [n] => out.push(int(n)?),
            [lo, hi] => {
                let (lo, hi) = (int(lo)?, int(hi)?);
                if lo > hi {
                    return Err(format!("empty length range `{item}`"));
                }
                out.extend(lo..=hi);
            }
            [lo, hi, count] => {
                let (lo, hi, count) = (int(lo)?, int(hi)?, int(count)?);
                if lo == 0 || lo > hi || count == 0 {
                    return Err(format!("bad geometric range `{item}`"));
                }
                if count == 1 {
                    out.push(lo);
                    continue;
                }
                let ratio = (hi as f64 / lo as f64).ln() / (count - 1) as f64;
                out.extend((0..count).map(|k| ((lo as f64) * (ratio * k as f64).exp()).round() as usize));
                out.push(hi);
            }
            _ => return Err(format!("bad length item `{item}`")),
        }
    }
    out.sort_unstable();
    out.dedup();
    if let Some(&n) = out.first() {
        if n < 2 {
            return Err(format!("chain length must be at least 2, got {n}"));
        }
    }
    Ok(out)
}

/// `x,y,z`, rescaled to unit length.
pub fn parse_bloch(src: &str) -> Result<[f64; 3], String> {
    let v = src
        .split(',')
        .map(|s| eval_real(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let [x, y, z] = v[..] else {
        return Err(format!("Bloch vector `{src}` needs three components"));
    };
    let norm = (x * x + y * y + z * z).sqrt();
    if norm == 0.0 {
        return Err("Bloch vector must be non-zero".into());
    }
    Ok([x / norm, y / norm, z / norm])
}
