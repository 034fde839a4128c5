"""Exact flat-geometry toolkit for translation surfaces."""
