//! Named test functions, parsed from colon-separated prefix notation.
//!
//! ```text
//! spec := moebius | liouville | one | identity
//!       | tau_k:K | tau_minus_kappa:κ | legendre_chi:q
//!       | twist:<spec>:γ | product:<spec>:<spec>
//! ```

use crate::error::{Error, Result};
use crate::multfun::MultiplicativeSpec;

/// One line per accepted form, for help output.
pub const CATALOG_FORMS: &[&str] = &[
    "moebius",
    "liouville",
    "one",
    "identity",
    "tau_k:K",
    "tau_minus_kappa:KAPPA",
    "legendre_chi:Q",
    "twist:<spec>:GAMMA",
    "product:<spec>:<spec>",
];

pub fn catalog(name: &str) -> Result<MultiplicativeSpec> {
    let tokens: Vec<&str> = name.split(':').collect();
    let mut pos = 0;
    let spec = parse(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::UnknownFunction(format!("{name} (trailing `{}`)", tokens[pos..].join(":"))));
    }
    Ok(spec.renamed(name))
}

fn next<'a>(tokens: &[&'a str], pos: &mut usize, what: &str) -> Result<&'a str> {
    let t = tokens
        .get(*pos)
        .ok_or_else(|| Error::MalformedParameter { name: what.into(), value: "<missing>".into() })?;
    *pos += 1;
    Ok(t)
}

fn number<T: std::str::FromStr>(tokens: &[&str], pos: &mut usize, what: &str) -> Result<T> {
    let raw = next(tokens, pos, what)?;
    raw.trim()
        .parse()
        .map_err(|_| Error::MalformedParameter { name: what.into(), value: raw.into() })
}

fn parse(tokens: &[&str], pos: &mut usize) -> Result<MultiplicativeSpec> {
    let head = next(tokens, pos, "function")?;
    Ok(match head {
        "moebius" | "mobius" | "mu" => MultiplicativeSpec::moebius(),
        "liouville" | "lambda" => MultiplicativeSpec::liouville(),
        "one" | "ones" => MultiplicativeSpec::ones(),
        "identity" | "epsilon" => MultiplicativeSpec::identity(),
        "tau_k" => {
            let k: u32 = number(tokens, pos, "tau_k")?;
            if k == 0 {
                return Err(Error::MalformedParameter { name: "tau_k".into(), value: "0".into() });
            }
            MultiplicativeSpec::tau_k(k)
        }
        "tau_minus_kappa" => {
            let kappa: f64 = number(tokens, pos, "tau_minus_kappa")?;
            if !(kappa.is_finite() && kappa > 0.0) {
                return Err(Error::MalformedParameter { name: "tau_minus_kappa".into(), value: kappa.to_string() });
            }
            MultiplicativeSpec::tau_minus_kappa(kappa)
        }
        "legendre_chi" => MultiplicativeSpec::legendre_chi(number(tokens, pos, "legendre_chi")?)?,
        "twist" => {
            let inner = parse(tokens, pos)?;
            let gamma: f64 = number(tokens, pos, "twist")?;
            if !gamma.is_finite() {
                return Err(Error::MalformedParameter { name: "twist".into(), value: gamma.to_string() });
            }
            inner.twist(gamma)
        }
        "product" => {
            let a = parse(tokens, pos)?;
            let b = parse(tokens, pos)?;
            a.convolve(&b)
        }
        other => return Err(Error::UnknownFunction(other.into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn examples() {
        assert_eq!(catalog("moebius").unwrap().at(3, 1), Complex64::new(-1.0, 0.0));
        assert_eq!(catalog("legendre_chi:5").unwrap().at(2, 1), Complex64::new(-1.0, 0.0));
        assert_eq!(catalog("legendre_chi:5").unwrap().at(11, 1), Complex64::new(1.0, 0.0));
        let prod = catalog("product:moebius:twist:moebius:1.0").unwrap();
        assert_eq!(prod.declared_d(), 2);
        assert_eq!(prod.name(), "product:moebius:twist:moebius:1.0");
        for p in [2u64, 3, 101] {
            let want = -Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, (p as f64).ln());
            assert!((prod.at(p, 1) - want).norm() < 1e-14);
        }
        assert_eq!(catalog("tau_k:3").unwrap().at(2, 2), Complex64::new(6.0, 0.0));
        assert_eq!(catalog("tau_minus_kappa:1.41421356").unwrap().declared_d(), 2);
        let nested = catalog("twist:product:liouville:legendre_chi:7:0.5").unwrap();
        assert_eq!(nested.declared_d(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(catalog("zeta"), Err(Error::UnknownFunction(_))));
        assert!(matches!(catalog("tau_k:x"), Err(Error::MalformedParameter { .. })));
        assert!(matches!(catalog("tau_k"), Err(Error::MalformedParameter { .. })));
        assert!(matches!(catalog("legendre_chi:4"), Err(Error::MalformedParameter { .. })));
        assert!(catalog("moebius:1").is_err());
        assert!(catalog("product:moebius").is_err());
        assert!(catalog("tau_minus_kappa:-1").is_err());
    }
}
