//! Parsing of `--theta` and `--phi` arguments: inline JSON, a file holding
//! JSON, or a short name.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tto_core::blaschke::BlaschkeProduct;
use tto_core::circle::TrigPolynomial;
use tto_core::random;

/// `Θ` from inline JSON, `z^n`, `random[:max_degree]` or a JSON file.
pub fn theta(arg: &str, seed: u64) -> Result<BlaschkeProduct> {
    let arg = arg.trim();
    if arg.starts_with('{') {
        return from_json(arg, "--theta");
    }
    if let Some(n) = monomial_power(arg)? {
        let n = u32::try_from(n).map_err(|_| anyhow!("degree {n} is too large"))?;
        return Ok(BlaschkeProduct::monomial(n));
    }
    if let Some(rest) = arg.strip_prefix("random") {
        let max_degree = match rest.strip_prefix(':') {
            Some(d) => d
                .parse()
                .with_context(|| format!("bad degree in {arg:?}"))?,
            None if rest.is_empty() => 8,
            None => bail!("unrecognized Θ {arg:?}"),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(random::blaschke(
            &mut rng,
            max_degree,
            random::DEFAULT_MAX_RADIUS,
        ));
    }
    from_file(arg, "--theta")
}

/// `φ` from a preset, inline JSON or a JSON file.
///
/// Presets: `constant[:c]`, `re_z`, `cos`, `shifted_cos`, `z^k`,
/// `random[:max_degree]`.
pub fn phi(arg: &str, seed: u64) -> Result<TrigPolynomial> {
    let arg = arg.trim();
    if arg.starts_with('{') {
        return from_json(arg, "--phi");
    }
    match arg {
        "constant" => return Ok(TrigPolynomial::constant(Complex64::new(1.0, 0.0))),
        "re_z" => return Ok(TrigPolynomial::re_z()),
        "cos" => return Ok(TrigPolynomial::cos()),
        "shifted_cos" => return Ok(TrigPolynomial::shifted_cos()),
        _ => {}
    }
    if let Some(value) = arg.strip_prefix("constant:") {
        let c: f64 = value
            .parse()
            .with_context(|| format!("bad constant in {arg:?}"))?;
        return Ok(TrigPolynomial::constant(Complex64::new(c, 0.0)));
    }
    if let Some(k) = monomial_power(arg)? {
        let k = i64::try_from(k)?;
        return Ok(TrigPolynomial::monomial(k, Complex64::new(1.0, 0.0)));
    }
    if let Some(rest) = arg.strip_prefix("random") {
        let max_degree = match rest.strip_prefix(':') {
            Some(d) => d
                .parse()
                .with_context(|| format!("bad degree in {arg:?}"))?,
            None if rest.is_empty() => 8,
            None => bail!("unrecognized φ {arg:?}"),
        };
        // Separate stream from the one used for a random Θ.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        return Ok(random::trig_polynomial(&mut rng, max_degree));
    }
    from_file(arg, "--phi")
}

/// `z` → 1, `z^n` → n; anything else is not a monomial.
fn monomial_power(arg: &str) -> Result<Option<usize>> {
    if arg == "z" {
        return Ok(Some(1));
    }
    match arg.strip_prefix("z^") {
        Some(n) => Ok(Some(
            n.parse()
                .with_context(|| format!("bad exponent in {arg:?}"))?,
        )),
        None => Ok(None),
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str, flag: &str) -> Result<T> {
    serde_json::from_str(text).with_context(|| format!("{flag}: malformed JSON"))
}

fn from_file<T: serde::de::DeserializeOwned>(path: &str, flag: &str) -> Result<T> {
    if !Path::new(path).is_file() {
        bail!("{flag}: {path:?} is neither a known name, inline JSON, nor a readable file");
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("{flag}: reading {path}"))?;
    serde_json::from_str(&text).with_context(|| format!("{flag}: malformed JSON in {path}"))
}
