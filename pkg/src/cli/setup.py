"""
Copyright 2024 Google LLC

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

from setuptools import setup, find_packages

setup(
    name="orbifold_resolution_cli",
    version="0.1.0",
    description="CLI for the orbifold resolution toolkit",
    author="Google LLC",
    author_email="noreply@google.com",
    packages=find_packages(include=["orbifold_resolution_cli*"]),
    install_requires=[
        "orbifoldutils_resolution>=0.1.0",
        "numpy>=1.26",
        "pandas==2.2.2",
        "toml==0.10.2",
        "pydantic>=2.6",
    ],
    entry_points={
        "console_scripts": [
            "orbifold-resolve=orbifold_resolution_cli.cli:main",
        ],
    },
    python_requires=">=3.9",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
