use rsr_core::C64;

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// `RE`, `IMi`, `RE+IMi`, `RE-IMi`, each part with optional sign and
/// exponent. A bare `i` means 1i.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(&t).map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(C64::new(parse_real(re)?, parse_real(im).map_err(|_| format!("'{s}' is not a complex number"))?))
}

pub fn parse_triple(s: &str) -> Result<[C64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got '{s}'"));
    }
    Ok([parse_complex(parts[0])?, parse_complex(parts[1])?, parse_complex(parts[2])?])
}

pub fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got '{s}'"))?;
    let (a, b) = (parse_real(a.trim())?, parse_real(b.trim())?);
    if a < b {
        Ok((a, b))
    } else {
        Err(format!("empty interval {a},{b}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_syntax() {
        assert_eq!(parse_complex("0.3+0.2i").unwrap(), C64::new(0.3, 0.2));
        assert_eq!(parse_complex("-0.1-0.4i").unwrap(), C64::new(-0.1, -0.4));
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), C64::new(0.0, -2.5));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("1-i").unwrap(), C64::new(1.0, -1.0));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), C64::new(1e-3, 20.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn lists() {
        let t = parse_triple("2,2+1i,-3").unwrap();
        assert_eq!(t[1], C64::new(2.0, 1.0));
        assert!(parse_triple("1,2").is_err());
        assert_eq!(parse_pair("-1, 2").unwrap(), (-1.0, 2.0));
        assert!(parse_pair("2,1").is_err());
    }
}
