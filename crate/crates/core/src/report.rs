//! Deterministic report serialization: a minimal JSON writer with
//! lexicographically ordered keys and 17-significant-digit numbers, plus the
//! CSV emitters shared by the CLI.

use crate::dynamics::fmt_g17;

/// JSON value with deterministic rendering.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Num(x) => {
                if x.is_finite() {
                    out.push_str(&fmt_g17(*x));
                } else {
                    // JSON has no infinities; encode as strings.
                    out.push_str(&format!("\"{x}\""));
                }
            }
            Json::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        '\r' => out.push_str("\\r"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    pad(out, indent + 2);
                    item.write(out, indent + 2);
                    if i + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(pairs) => {
                if pairs.is_empty() {
                    out.push_str("{}");
                    return;
                }
                // Lexicographic key order for byte-stable diffs.
                let mut sorted: Vec<&(String, Json)> = pairs.iter().collect();
                sorted.sort_by(|a, b| a.0.cmp(&b.0));
                out.push_str("{\n");
                for (i, (k, v)) in sorted.iter().enumerate() {
                    pad(out, indent + 2);
                    Json::Str(k.clone()).write(out, indent + 2);
                    out.push_str(": ");
                    v.write(out, indent + 2);
                    if i + 1 < sorted.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                pad(out, indent);
                out.push('}');
            }
        }
    }
}

fn pad(out: &mut String, n: usize) {
    for _ in 0..n {
        out.push(' ');
    }
}

/// Convenience constructor for object literals.
pub fn obj(pairs: Vec<(&str, Json)>) -> Json {
    Json::Obj(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_numbers_are_g17() {
        let j = obj(vec![
            ("zeta", Json::Num(0.25)),
            ("alpha", Json::Int(3)),
            ("mid", Json::Arr(vec![Json::Bool(true), Json::Null])),
        ]);
        let s = j.render();
        let za = s.find("\"zeta\"").unwrap();
        let al = s.find("\"alpha\"").unwrap();
        let mi = s.find("\"mid\"").unwrap();
        assert!(al < mi && mi < za);
        assert!(s.contains("2.5000000000000000e-1"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let j = obj(vec![("b", Json::Num(1.0 / 3.0)), ("a", Json::Str("x\"y".into()))]);
        assert_eq!(j.render(), j.render());
        assert!(j.render().contains("x\\\"y"));
    }
}
