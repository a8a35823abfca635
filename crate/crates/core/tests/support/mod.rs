pub mod hartree_oracle;
