//! The shipped model library, addressed as `builtin:<name>`.

use super::{parse, DslError, ErrorKind, ModelFile};
use crate::name::Name;

const PHIL: &str = include_str!("../../models/phil.mka");
const FORK: &str = include_str!("../../models/fork.mka");
const EXAMPLE: &str = include_str!("../../models/example.mka");
const SOFIA: &str = include_str!("../../models/sofia.mka");

/// Names accepted after `builtin:`. `dining/<n>` and `sofia/<seats>/<children>`
/// select other sizes.
pub fn builtin_names() -> &'static [&'static str] {
    &["phil", "fork", "example", "dining", "sofia", "library"]
}

/// `let DF<n> = norm(pfb[A](Phil || Fork || ... ))`
fn dining_let(n: usize) -> String {
    let ring = vec!["Phil || Fork"; n].join(" || ");
    format!("\nlet DF{n} = norm(pfb[A]({ring}))\n")
}

fn sofia_let(seats: usize, children: usize) -> String {
    let ring = vec!["S || (parwire[id; Move] x Fork1)"; seats].join(" || ");
    let init = sofia_initial(seats, children);
    format!("\n# start from {init}\nlet Sofia{seats}_{children} = norm(pfb[Move * Hand]({ring}))\n")
}

/// Phil, Fork and the closed rings `DF<k>` for each `k` in `sizes`.
pub fn dining_source(sizes: &[usize]) -> String {
    let mut s = format!("{PHIL}\n{FORK}");
    for &n in sizes {
        s.push_str(&dining_let(n));
    }
    s
}

/// The seat components and the party for `seats` seats.
pub fn sofia_source(seats: usize, children: usize) -> String {
    format!("{SOFIA}{}", sofia_let(seats, children))
}

/// All philosophers start thinking and all forks lie on the table.
pub fn dining_initial(n: usize) -> Name {
    Name::Tuple(vec![Name::Num(1); 2 * n])
}

/// Empty seats (state 5) come first, then seated children with no forks.
pub fn sofia_initial(seats: usize, children: usize) -> Name {
    let mut items = Vec::with_capacity(2 * seats);
    for i in 0..seats {
        items.push(Name::Num(if i < seats - children.min(seats) { 5 } else { 1 }));
        items.push(Name::Num(1));
    }
    Name::Tuple(items)
}

/// Conventional start state for a generated `DF<n>` or `Sofia<s>_<c>` let.
pub fn builtin_initial(name: &str) -> Option<Name> {
    if let Some(n) = name.strip_prefix("DF") {
        return n.parse().ok().filter(|&n| n >= 1).map(dining_initial);
    }
    let (s, c) = name.strip_prefix("Sofia")?.split_once('_')?;
    let (s, c): (usize, usize) = (s.parse().ok()?, c.parse().ok()?);
    (s >= 1 && c <= s).then(|| sofia_initial(s, c))
}

/// Source text of a builtin file.
pub fn builtin_source(name: &str) -> Option<String> {
    let sized = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    Some(match name {
        "phil" => PHIL.to_string(),
        "fork" => format!("{PHIL}\n{FORK}"),
        "example" => EXAMPLE.to_string(),
        "dining" => dining_source(&[2, 3]),
        "sofia" => sofia_source(3, 2),
        "library" => format!("{}\n{}\n{EXAMPLE}", dining_source(&[2, 3]), sofia_source(3, 2)),
        other => {
            if let Some(n) = other.strip_prefix("dining/") {
                dining_source(&[sized(n)?])
            } else {
                let rest = other.strip_prefix("sofia/")?;
                let (s, c) = rest.split_once('/')?;
                let (s, c) = (sized(s)?, c.parse::<usize>().ok()?);
                if c > s {
                    return None;
                }
                sofia_source(s, c)
            }
        }
    })
}

/// Every builtin model in one file.
pub fn builtin_library() -> ModelFile {
    parse(&builtin_source("library").expect("library")).expect("builtin library parses")
}

/// Reads `builtin:<name>` from the library, anything else from disk.
pub fn resolve_source(spec: &str) -> Result<String, DslError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        builtin_source(name).ok_or_else(|| {
            DslError::unpositioned(
                ErrorKind::UnknownReference,
                format!("no builtin `{name}`; available: {}", builtin_names().join(", ")),
            )
        })
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| DslError::unpositioned(ErrorKind::UnknownReference, format!("cannot read {spec}: {e}")))
    }
}
