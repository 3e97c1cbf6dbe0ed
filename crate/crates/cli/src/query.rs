//! Point-query mini syntax: `P(X=3)`, `P(X=3, Y=1)`.

use pga_core::{Valuation, VarId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed query `{0}`: expected the form P(X=3, Y=1)")]
pub struct QueryError(pub String);

/// Parses a point query. Variables not mentioned are marginalized.
pub fn parse_point_query(text: &str) -> Result<Valuation, QueryError> {
    let err = || QueryError(text.to_string());
    let body = text
        .trim()
        .strip_prefix("P(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(err)?;
    let mut v = Valuation::new();
    for part in body.split(',') {
        let (name, value) = part.split_once('=').ok_or_else(err)?;
        let name = name.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(err());
        }
        let value: u64 = value.trim().parse().map_err(|_| err())?;
        let var = VarId::from(name);
        if v.contains(&var) {
            return Err(err());
        }
        v.set(var, value);
    }
    Ok(v)
}
