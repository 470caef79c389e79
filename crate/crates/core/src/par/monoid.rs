use std::ops::Add;

/// An associative operator with its neutral element.
///
/// Associativity is a caller obligation; it is checked by property tests,
/// never per call. `commutative` records whether operand order may be
/// swapped, which `reduce_by_index` requires.
#[derive(Clone, Copy)]
pub struct Monoid<E, F> {
    op: F,
    neutral: E,
    commutative: bool,
}

impl<E: Copy, F: Fn(E, E) -> E> Monoid<E, F> {
    pub fn new(neutral: E, op: F) -> Self {
        Self {
            op,
            neutral,
            commutative: false,
        }
    }

    pub fn commutative(neutral: E, op: F) -> Self {
        Self {
            op,
            neutral,
            commutative: true,
        }
    }

    #[inline]
    pub fn combine(&self, a: E, b: E) -> E {
        (self.op)(a, b)
    }

    #[inline]
    pub fn neutral(&self) -> E {
        self.neutral
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub(crate) fn op(&self) -> &F {
        &self.op
    }
}

/// Numeric element types with the constants the stock monoids need.
pub trait Numeric: Copy + Add<Output = Self> + PartialOrd {
    const ZERO: Self;
    const LOWEST: Self;
    const HIGHEST: Self;
}

macro_rules! numeric {
    ($($t:ty => $lo:expr, $hi:expr);* $(;)?) => {
        $(impl Numeric for $t {
            const ZERO: Self = 0 as $t;
            const LOWEST: Self = $lo;
            const HIGHEST: Self = $hi;
        })*
    };
}

numeric! {
    i32 => i32::MIN, i32::MAX;
    i64 => i64::MIN, i64::MAX;
    u32 => u32::MIN, u32::MAX;
    u64 => u64::MIN, u64::MAX;
    usize => usize::MIN, usize::MAX;
    f32 => f32::NEG_INFINITY, f32::INFINITY;
    f64 => f64::NEG_INFINITY, f64::INFINITY;
}

pub type FnMonoid<T> = Monoid<T, fn(T, T) -> T>;

/// Addition with neutral zero. Overflow behaves like the element type's `+`.
pub fn sum<T: Numeric>() -> FnMonoid<T> {
    Monoid::commutative(T::ZERO, |a, b| a + b)
}

pub fn max<T: Numeric>() -> FnMonoid<T> {
    Monoid::commutative(T::LOWEST, |a, b| if b > a { b } else { a })
}

pub fn min<T: Numeric>() -> FnMonoid<T> {
    Monoid::commutative(T::HIGHEST, |a, b| if b < a { b } else { a })
}
