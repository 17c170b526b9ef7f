//! Small helpers shared by the literal parsers.

use crate::error::{Error, Result};

pub(crate) fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        let inner = &t[1..t.len() - 1];
        let mut depth = 0i32;
        for ch in inner.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return t;
            }
        }
        return inner.trim();
    }
    t
}

/// Splits at top-level `+` and binary `-` (a `-` preceded by whitespace).
pub(crate) fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let chars: Vec<char> = s.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        let binary_minus = ch == '-' && depth == 0 && i > 0 && chars[i - 1].is_whitespace()
            && !cur.trim().is_empty();
        if depth == 0 && (ch == '+' || binary_minus) {
            if cur.trim().is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            out.push((neg, cur.trim().to_string()));
            cur.clear();
            neg = ch == '-';
            continue;
        }
        cur.push(ch);
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse(format!("empty term in {s:?}")));
    }
    out.push((neg, cur.trim().to_string()));
    Ok(out)
}
