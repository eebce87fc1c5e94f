//! Characters in degrees 0, 1 and 2: circle-valued functions, U(1) lattice
//! connections and gerbes with connection.

pub mod circle;
pub mod connection;
pub mod gerbe;

pub use circle::{circle_function_of_spark, spark_of_circle_function, CircleFunction};
pub use connection::{monopole, spark_of_connection, LatticeConnection};
pub use gerbe::{fractional_gerbe, CechCochain, Cover, GerbeConnection, PatchAssignment};
