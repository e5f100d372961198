//! Single-entry perturbations of certificate text, for soundness probing.

use serde::Serialize;

/// An integer literal that a mutation may change. `start..end` is a byte
/// range into the whole text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationSite {
    pub line: usize,
    pub start: usize,
    pub end: usize,
    pub value: u64,
}

// Values under these keys configure the checker or name positions rather
// than state a table entry.
const SKIPPED_KEYS: [&str; 6] = ["m0=", "prime=", "seed=", "fact=", "pivot=", "triples="];

/// Integer literals in table entries: anywhere on `goal` and `expect` lines,
/// and in `key=value` tokens of `step` lines. Comments, names, configuration
/// keys and bare column positions are skipped.
pub fn mutation_sites(text: &str) -> Vec<MutationSite> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (i, raw) in text.split_inclusive('\n').enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let head = content.split_whitespace().next().unwrap_or("");
        if matches!(head, "goal" | "expect" | "step") {
            let mut pos = 0;
            for tok in content.split_whitespace() {
                let at = pos + content[pos..].find(tok).unwrap_or(0);
                pos = at + tok.len();
                if SKIPPED_KEYS.iter().any(|k| tok.starts_with(k)) || (head == "step" && !tok.contains('=')) {
                    continue;
                }
                let bytes = tok.as_bytes();
                let mut j = 0;
                while j < bytes.len() {
                    if !bytes[j].is_ascii_digit() {
                        j += 1;
                        continue;
                    }
                    let s = j;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    let inside_name = s > 0 && (bytes[s - 1].is_ascii_alphanumeric() || bytes[s - 1] == b'_');
                    if inside_name {
                        continue;
                    }
                    if let Ok(value) = tok[s..j].parse() {
                        out.push(MutationSite {
                            line: i + 1,
                            start: offset + at + s,
                            end: offset + at + j,
                            value,
                        });
                    }
                }
            }
        }
        offset += raw.len();
    }
    out
}

/// Replaces the literal at `site` by `value + delta`, keeping leading zeros.
/// `None` when the result would be negative or unchanged.
pub fn mutate_once(text: &str, site: &MutationSite, delta: i64) -> Option<String> {
    let v = i128::from(site.value) + i128::from(delta);
    if delta == 0 || v < 0 {
        return None;
    }
    let width = site.end - site.start;
    let lit = format!("{v:0width$}");
    let mut s = String::with_capacity(text.len() + 2);
    s.push_str(&text[..site.start]);
    s.push_str(&lit);
    s.push_str(&text[site.end..]);
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_names_and_config() {
        let t = "cert n5\ngoal empty deg=12m-1 mults=7m*6 m0=1  # 99\nuse n4\n\
                 step diverge pairs8 1 2 3 4 5 6 7 8\nstep conclude oracle-empty prime=32003 seed=1\n\
                 step glue fact=n4 count=2 at=1\n";
        let vals: Vec<u64> = mutation_sites(t).iter().map(|s| s.value).collect();
        assert_eq!(vals, [12, 1, 7, 6, 2, 1]);
    }

    #[test]
    fn replaces_in_place() {
        let t = "cert a\nstep constants a=0.05 b=1\n";
        let sites = mutation_sites(t);
        assert_eq!(sites.len(), 3);
        assert_eq!(mutate_once(t, &sites[1], 1).unwrap(), "cert a\nstep constants a=0.06 b=1\n");
        assert_eq!(mutate_once(t, &sites[2], -2), None);
        assert_eq!(mutate_once(t, &sites[2], 0), None);
    }
}
