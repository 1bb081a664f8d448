//! Parser for the coalescence assignment grammar:
//! `{e1,e2}->t; {e3}->fresh`, eigenvalue tokens as in the structure
//! grammar. Eigenvalues of the source structure that are not mentioned
//! keep their own value.

use std::collections::BTreeMap;

use pencil_strata::closure::{CoalesceTarget, CoalescenceAssignment};
use pencil_strata::structure::{Eigenvalue, PencilStructure};
use pencil_strata::{Error, Result};

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse {
        pos: 0,
        msg: msg.into(),
    }
}

/// Parses `text` against the spectrum of `s`. Multi-member `fresh`
/// classes coalesce into one shared new value (`@f1, @f2, …`).
pub fn parse_assignment(s: &PencilStructure, text: &str) -> Result<CoalescenceAssignment> {
    let mut map: BTreeMap<Eigenvalue, CoalesceTarget> = BTreeMap::new();
    let mut fresh_classes = 0usize;
    let taken: Vec<Eigenvalue> = s.eigenvalues().cloned().collect();

    for class in text.split(';') {
        let class = class.trim();
        if class.is_empty() {
            continue;
        }
        let Some(inner) = class.strip_prefix('{') else {
            return Err(parse_error(format!("class must start with '{{': {class}")));
        };
        let Some((members, target)) = inner.split_once('}') else {
            return Err(parse_error(format!("missing '}}' in class: {class}")));
        };
        let Some(target) = target.trim().strip_prefix("->") else {
            return Err(parse_error(format!("missing '->' after class: {class}")));
        };
        let target = target.trim();

        let mut parsed_members = Vec::new();
        for token in members.split(',') {
            let token = token.trim();
            if token.is_empty() {
                return Err(parse_error(format!("empty eigenvalue token in: {class}")));
            }
            let e = Eigenvalue::parse(token)?;
            if !taken.contains(&e) {
                return Err(Error::UnknownEigenvalue(e.to_string()));
            }
            parsed_members.push(e);
        }
        if parsed_members.is_empty() {
            return Err(parse_error(format!("empty class: {class}")));
        }

        let destination = if target == "fresh" {
            if parsed_members.len() == 1 {
                CoalesceTarget::Fresh
            } else {
                // members of one fresh class coalesce at a shared new value
                fresh_classes += 1;
                let mut label = fresh_classes;
                let mut candidate = Eigenvalue::symbolic(format!("f{label}"));
                while taken.contains(&candidate) {
                    label += 1;
                    candidate = Eigenvalue::symbolic(format!("f{label}"));
                }
                CoalesceTarget::To(candidate)
            }
        } else {
            CoalesceTarget::To(Eigenvalue::parse(target)?)
        };

        for e in parsed_members {
            if map.insert(e.clone(), destination.clone()).is_some() {
                return Err(parse_error(format!("{e} appears in two classes")));
            }
        }
    }

    // unmentioned eigenvalues keep their value
    for e in s.eigenvalues() {
        map.entry(e.clone())
            .or_insert_with(|| CoalesceTarget::To(e.clone()));
    }
    Ok(CoalescenceAssignment::new(map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structure() -> PencilStructure {
        PencilStructure::parse("3x3: J(0;1) J(1;1) J(2;1)").unwrap()
    }

    #[test]
    fn parses_classes_and_defaults() {
        // the unmentioned eigenvalue 2 keeps its value, which is the same
        // destination: all three end up in one class
        let a = parse_assignment(&structure(), "{0,1}->2").unwrap();
        assert_eq!(a.to_string(), "{0,1,2}->2");
        let identity = parse_assignment(&structure(), "").unwrap();
        assert_eq!(identity, CoalescenceAssignment::identity(&structure()));
    }

    #[test]
    fn fresh_classes() {
        let a = parse_assignment(&structure(), "{0}->fresh; {1,2}->fresh").unwrap();
        assert_eq!(
            a.get(&Eigenvalue::from_int(0)),
            Some(&CoalesceTarget::Fresh)
        );
        let shared = CoalesceTarget::To(Eigenvalue::symbolic("f1"));
        assert_eq!(a.get(&Eigenvalue::from_int(1)), Some(&shared));
        assert_eq!(a.get(&Eigenvalue::from_int(2)), Some(&shared));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_assignment(&structure(), "0->1").is_err());
        assert!(parse_assignment(&structure(), "{0}->").is_err());
        assert!(parse_assignment(&structure(), "{0}=1").is_err());
        assert!(parse_assignment(&structure(), "{7}->1").is_err());
        assert!(parse_assignment(&structure(), "{0}->1; {0}->2").is_err());
    }
}
