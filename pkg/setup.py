from setuptools import find_packages, setup

setup(
    name="nilmetric-workbench",
    version="1.0.0",
    description="Exact-arithmetic workbench for nilpotent Lie algebras with ad-invariant metrics",
    packages=find_packages(include=["src", "src.*"]),
    include_package_data=True,
    python_requires=">=3.10",
    install_requires=[
        "fastapi==0.115.0",
        "uvicorn[standard]",
        "python-dotenv>=1.0.0",
        "pydantic>=2.0.0",
        "sympy>=1.13",
        "gmpy2>=2.1.0",
        "pyparsing>=3.1.0",
    ],
    entry_points={"console_scripts": ["nilmetric=src.cli:main"]},
)
