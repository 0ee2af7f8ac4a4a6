//! Rational newforms of small level and weight not covered by eta products.

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../data/newforms/", $name)))),*]
    };
}

pub(super) const BUNDLED: &[(&str, &str)] = bundled![
    "2.10.a.qs",
    "3.8.a.qs",
    "3.10.a.qs",
    "3.10.b.qs",
    "3.12.a.qs",
    "4.10.a.qs",
    "4.12.a.qs",
    "5.6.a.qs",
    "5.8.a.qs",
    "5.10.a.qs",
    "5.12.a.qs",
    "6.6.a.qs",
    "6.8.a.qs",
    "6.10.a.qs",
    "6.12.a.qs",
    "6.12.b.qs",
    "6.12.c.qs",
    "7.4.a.qs",
    "7.6.a.qs",
    "7.8.a.qs",
    "8.4.a.qs",
    "8.6.a.qs",
    "8.8.a.qs",
    "8.8.b.qs",
    "8.10.a.qs",
    "8.10.b.qs",
    "8.12.a.qs",
    "9.4.a.qs",
    "9.6.a.qs",
    "9.8.a.qs",
    "9.10.a.qs",
    "9.10.b.qs",
    "9.10.c.qs",
    "9.12.a.qs",
    "9.12.b.qs",
    "10.4.a.qs",
    "10.6.a.qs",
    "10.6.b.qs",
    "10.6.c.qs",
    "10.8.a.qs",
    "10.10.a.qs",
    "10.10.b.qs",
    "10.10.c.qs",
    "10.12.a.qs",
    "10.12.b.qs",
    "10.12.c.qs",
    "11.6.a.qs",
    "12.4.a.qs",
    "12.8.a.qs",
    "12.8.b.qs",
    "12.10.a.qs",
    "12.12.a.qs",
    "12.12.b.qs",
];
