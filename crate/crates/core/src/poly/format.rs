//! Human form (`x^16+x^3+1`) and hexadecimal form (`10009`) of polynomials.
//!
//! In hex form the least significant bit of the last digit is the constant
//! coefficient, so `x^2+x+1` is `7`.

use std::fmt;
use std::str::FromStr;

use super::DensePoly;
use crate::error::Error;

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for e in self.exponents().rev() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensePoly({self})")
    }
}

impl fmt::LowerHex for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::PolyParse { input: input.to_string(), reason: reason.into() }
}

impl DensePoly {
    pub fn to_hex(&self) -> String {
        let Some(deg) = self.degree() else {
            return "0".to_string();
        };
        let digits = deg / 4 + 1;
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4).fold(0u32, |acc, b| acc | (self.coeff(4 * d + b) as u32) << b);
                char::from_digit(nibble, 16).expect("nibble")
            })
            .collect()
    }

    /// Parses hex digits, with or without a `0x` prefix.
    pub fn from_hex(input: &str) -> Result<Self, Error> {
        let digits = input.trim();
        let digits = digits.strip_prefix("0x").unwrap_or(digits);
        if digits.is_empty() {
            return Err(parse_err(input, "no hex digits"));
        }
        let mut exps = Vec::new();
        for (pos, c) in digits.chars().rev().enumerate() {
            let v = c.to_digit(16).ok_or_else(|| parse_err(input, format!("bad hex digit {c:?}")))?;
            exps.extend((0..4).filter(|b| (v >> b) & 1 == 1).map(|b| 4 * pos + b));
        }
        Ok(Self::from_exponents(&exps))
    }
}

impl FromStr for DensePoly {
    type Err = Error;

    /// Parses the human form; a `0x` prefix selects hex instead.
    fn from_str(input: &str) -> Result<Self, Error> {
        let text = input.trim();
        if text.starts_with("0x") {
            return Self::from_hex(text);
        }
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut exps = Vec::new();
        for term in text.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            let e = match term.as_str() {
                "1" => 0,
                "x" => 1,
                _ => term
                    .strip_prefix("x^")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(input, format!("bad term {term:?}")))?,
            };
            exps.push(e);
        }
        Ok(Self::from_exponents(&exps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn human_form() {
        let t: DensePoly = "x^16+x^3+1".parse().unwrap();
        assert_eq!(t.to_string(), "x^16+x^3+1");
        assert_eq!(DensePoly::x().to_string(), "x");
        assert_eq!(DensePoly::zero().to_string(), "0");
        assert_eq!(" x^2 + x + 1 ".parse::<DensePoly>().unwrap().to_hex(), "7");
        assert_eq!("x+x".parse::<DensePoly>().unwrap(), DensePoly::zero());
        assert!("x^".parse::<DensePoly>().is_err());
        assert!("y^2+1".parse::<DensePoly>().is_err());
        assert!("".parse::<DensePoly>().is_err());
    }

    #[test]
    fn hex_form() {
        let t: DensePoly = "x^16+x^3+1".parse().unwrap();
        assert_eq!(t.to_hex(), "10009");
        assert_eq!(format!("{t:x}"), "10009");
        assert_eq!(DensePoly::from_hex("0x10009").unwrap(), t);
        assert_eq!("0x7".parse::<DensePoly>().unwrap().to_string(), "x^2+x+1");
        assert_eq!(DensePoly::zero().to_hex(), "0");
        assert_eq!(DensePoly::from_hex("000b").unwrap().to_string(), "x^3+x+1");
        assert!(DensePoly::from_hex("12g").is_err());
    }

    proptest! {
        #[test]
        fn both_forms_parse_back(exps in proptest::collection::vec(0usize..300, 0..30)) {
            let a = DensePoly::from_exponents(&exps);
            prop_assert_eq!(a.to_string().parse::<DensePoly>().unwrap(), a.clone());
            prop_assert_eq!(DensePoly::from_hex(&a.to_hex()).unwrap(), a);
        }
    }
}
