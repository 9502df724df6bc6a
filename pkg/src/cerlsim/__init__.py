"""cerlsim: executable semantics workbench for a concurrent Core Erlang subset."""

__version__ = "0.1.0"
