"""Discover contributor-role taxonomies from "Authors' contributions" sections
and extract (author, role) pairs with a keyword-feature Naive Bayes classifier."""

__version__ = "0.1.0"
