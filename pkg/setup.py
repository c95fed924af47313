import setuptools

setuptools.setup(
    name="z3ro",
    version="0.1.0",
    author="the z3ro authors",
    author_email="",
    description="Distortion-cancelling linear precoders for large antenna arrays",
    packages=setuptools.find_packages(exclude=["examples", "examples.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
    install_requires=["numpy", "scipy", "pandas", "pyyaml", "joblib"],
)
