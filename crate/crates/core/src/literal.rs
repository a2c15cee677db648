//! Closed enumerations that render to and parse from fixed literals.
//!
//! Every enumerated template field (situation, priority, actor category, ...)
//! is declared through [`literal_enum!`], which gives it a canonical spelling,
//! optional input aliases and string-based serde.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An enumeration with a fixed canonical literal per variant.
pub trait Literal: Sized + Copy + Eq + 'static {
    /// Every variant, in declaration order.
    const ALL: &'static [Self];

    fn literal(self) -> &'static str;

    /// Alternative spellings accepted on input (never emitted).
    fn aliases(self) -> &'static [&'static str] {
        &[]
    }

    /// Case-insensitive lookup against canonical literals and aliases.
    fn from_literal(text: &str) -> Option<Self> {
        let wanted = normalize(text);
        Self::ALL.iter().copied().find(|v| {
            normalize(v.literal()) == wanted || v.aliases().iter().any(|a| normalize(a) == wanted)
        })
    }
}

fn normalize(text: &str) -> String {
    text.trim()
        .chars()
        .filter(|c| !matches!(c, ' ' | '-' | '_'))
        .flat_map(char::to_lowercase)
        .collect()
}

macro_rules! literal_enum {
    (
        $(#[$meta:meta])*
        pub enum $name:ident {
            $(
                $(#[$vmeta:meta])*
                $variant:ident => $lit:literal $([$($alias:literal),*])?
            ),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $( $(#[$vmeta])* $variant ),+
        }

        impl $crate::literal::Literal for $name {
            const ALL: &'static [Self] = &[$($name::$variant),+];

            fn literal(self) -> &'static str {
                match self {
                    $($name::$variant => $lit),+
                }
            }

            fn aliases(self) -> &'static [&'static str] {
                match self {
                    $($name::$variant => &[$($($alias),*)?]),+
                }
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str($crate::literal::Literal::literal(*self))
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = $crate::literal::UnknownLiteral;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                <Self as $crate::literal::Literal>::from_literal(s).ok_or_else(|| {
                    $crate::literal::UnknownLiteral {
                        type_name: stringify!($name),
                        value: s.trim().to_string(),
                    }
                })
            }
        }

        impl ::serde::Serialize for $name {
            fn serialize<S: ::serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str($crate::literal::Literal::literal(*self))
            }
        }

        impl<'de> ::serde::Deserialize<'de> for $name {
            fn deserialize<D: ::serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let raw = String::deserialize(d)?;
                raw.parse().map_err(::serde::de::Error::custom)
            }
        }
    };
}

pub(crate) use literal_enum;

/// A literal that matched no variant of the named enumeration.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{value}` is not a valid {type_name}")]
pub struct UnknownLiteral {
    pub type_name: &'static str,
    pub value: String,
}

/// An enumerated field as written by an author: either a recognised literal
/// or the raw text that failed to match.
///
/// Keeping the raw text lets the model represent inconsistent documents so
/// that validation can report them instead of the parser rejecting them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Choice<T> {
    Valid(T),
    Invalid(String),
}

impl<T: Literal> Choice<T> {
    pub fn parse(text: &str) -> Self {
        match T::from_literal(text) {
            Some(v) => Choice::Valid(v),
            None => Choice::Invalid(text.trim().to_string()),
        }
    }

    pub fn valid(&self) -> Option<T> {
        match self {
            Choice::Valid(v) => Some(*v),
            Choice::Invalid(_) => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Choice::Valid(_))
    }

    pub fn as_text(&self) -> &str {
        match self {
            Choice::Valid(v) => v.literal(),
            Choice::Invalid(raw) => raw,
        }
    }
}

impl<T> From<T> for Choice<T> {
    fn from(v: T) -> Self {
        Choice::Valid(v)
    }
}

impl<T: Literal> fmt::Display for Choice<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_text())
    }
}

impl<T: Literal> Serialize for Choice<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_text())
    }
}

impl<'de, T: Literal> Deserialize<'de> for Choice<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Ok(Choice::parse(&raw))
    }
}
