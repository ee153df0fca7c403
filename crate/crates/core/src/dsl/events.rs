//! Event stream files: one `seq,event_name` per line.

use super::diagnostic::{Code, Diagnostic};
use crate::him::EventOccurrence;
use crate::model::is_valid_ident;

/// Parses an event stream. Blank lines and `#` comments are ignored.
/// Occurrences keep file order; the sequence number becomes `at`.
pub fn parse_events(text: &str) -> Result<Vec<EventOccurrence>, Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let Some((seq, name)) = content.split_once(',') else {
            diags.push(Diagnostic::new(
                Code::EventsSyntax,
                line,
                indent + 1,
                "expected `seq,event_name`",
            ));
            continue;
        };
        let seq_col = indent + 1;
        let name_col = seq.chars().count() + 2 + (name.len() - name.trim_start().len());
        match seq.trim().parse::<u64>() {
            Ok(at) => {
                let name = name.trim();
                if is_valid_ident(name) {
                    out.push(EventOccurrence::new(at, name));
                } else {
                    diags.push(Diagnostic::new(
                        Code::EventsSyntax,
                        line,
                        name_col,
                        format!("`{name}` is not a valid event name"),
                    ));
                }
            }
            Err(_) => diags.push(Diagnostic::new(
                Code::EventsSyntax,
                line,
                seq_col,
                format!("`{}` is not a sequence number", seq.trim()),
            )),
        }
    }
    if diags.is_empty() {
        Ok(out)
    } else {
        Err(diags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_lines_in_order() {
        let ev = parse_events("# stream\n2,tick\n\n1, alarm\n").unwrap();
        assert_eq!(
            ev,
            vec![
                EventOccurrence::new(2, "tick"),
                EventOccurrence::new(1, "alarm")
            ]
        );
    }

    #[test]
    fn reports_positions() {
        let d = parse_events("1,tick\nx,tick\n3,9bad\nnocomma\n").unwrap_err();
        let pos: Vec<_> = d.iter().map(|d| (d.line, d.column)).collect();
        assert_eq!(pos, vec![(2, 1), (3, 3), (4, 1)]);
    }
}
