import pytest

from rolemine.normalize import load_default_keywords, load_stopwords


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def default_kw():
    return load_default_keywords()
