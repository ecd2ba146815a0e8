/// Parses `7`, `1..5` (inclusive) and comma-separated mixtures such as `1..3,10`.
pub fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if part.is_empty() {
            return Err(format!("empty item in list {s:?}"));
        }
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
            let b: usize = b.trim().parse().map_err(|_| format!("bad range end in {part:?}"))?;
            if b < a {
                return Err(format!("range {part:?} is empty"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("bad integer {part:?}"))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_list("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_list("5").unwrap(), vec![5]);
        assert_eq!(parse_list("1..2, 9").unwrap(), vec![1, 2, 9]);
        assert!(parse_list("").is_err());
        assert!(parse_list("3..1").is_err());
        assert!(parse_list("a..2").is_err());
    }
}
