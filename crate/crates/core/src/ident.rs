//! Identifier kinds shared by choreographies and processes.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

macro_rules! name_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                $name(Arc::from(name.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({:?})", stringify!($name), &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(Arc::from(s))
            }
        }
    };
}

name_type!(
    /// A process name.
    Pid
);
name_type!(
    /// A variable name, local to each process.
    Var
);
name_type!(
    /// A procedure name.
    RecVar
);

/// Selection label. There are exactly two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Left,
    Right,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Left, Label::Right];

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "left" => Some(Label::Left),
            "right" => Some(Label::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Left => "left",
            Label::Right => "right",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_compare_by_content() {
        assert_eq!(Pid::new("p"), Pid::from("p"));
        assert_ne!(Pid::new("p"), Pid::new("q"));
        assert!(Pid::new("buyer") < Pid::new("seller"));
    }

    #[test]
    fn labels() {
        assert_eq!(Label::ALL.len(), 2);
        assert_eq!(Label::parse("left"), Some(Label::Left));
        assert_eq!(Label::parse("up"), None);
        assert_eq!(Label::Right.to_string(), "right");
    }
}
