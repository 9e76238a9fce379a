"""Finite p-group toolkit for ZJ-type subgroups and Thompson-Glauberman replacement."""
