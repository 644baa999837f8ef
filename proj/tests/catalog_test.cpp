// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "dualsql/catalog.hpp"
#include "dualsql/error.hpp"
#include "testkit.hpp"

namespace dualsql {
namespace {

TEST(Catalog, LoadsMoviesFixture) {
  auto ld = testkit::movies();
  const auto& cat = ld.catalog;
  ASSERT_EQ(cat.table_count(), 3u);
  EXPECT_EQ(cat.edges().size(), 2u);
  TableId actor = *cat.find_table("actor");
  EXPECT_EQ(cat.columns_of(actor).size(), 6u);
  ColumnId aid = cat.column_id("actor", "aid");
  EXPECT_TRUE(cat.is_primary_key(aid));
  EXPECT_FALSE(cat.is_primary_key(cat.column_id("actor", "name")));
  EXPECT_EQ(cat.type_of(cat.column_id("actor", "birth_yr")), SemanticType::kNumber);
  EXPECT_EQ(cat.qualified_name(cat.column_id("movies", "year")), "movies.year");
  EXPECT_EQ(ld.db.query("SELECT COUNT(*) FROM actor").rows[0][0], Value(12.0));
  EXPECT_EQ(ld.db.query("SELECT COUNT(*) FROM starring").rows[0][0], Value(21.0));
}

TEST(Catalog, LoadsSchemaOnlyDatabase) {
  auto ld = load_catalog(testkit::data_dir() / "mas");
  EXPECT_EQ(ld.catalog.table_count(), 15u);
  EXPECT_EQ(ld.catalog.edges().size(), 19u);
}

TEST(Catalog, RejectsDuplicateTable) {
  std::vector<TableDef> tables = {{"a", {{"x", SemanticType::kNumber}}, {"x"}},
                                  {"a", {{"y", SemanticType::kNumber}}, {"y"}}};
  EXPECT_THROW(SchemaCatalog(tables, {}), CatalogError);
}

TEST(Catalog, RejectsDuplicateColumn) {
  std::vector<TableDef> tables = {
      {"a", {{"x", SemanticType::kNumber}, {"x", SemanticType::kText}}, {}}};
  EXPECT_THROW(SchemaCatalog(tables, {}), CatalogError);
}

TEST(Catalog, RejectsUnknownPrimaryKey) {
  std::vector<TableDef> tables = {{"a", {{"x", SemanticType::kNumber}}, {"nope"}}};
  EXPECT_THROW(SchemaCatalog(tables, {}), CatalogError);
}

TEST(Catalog, RejectsForeignKeyToNonKey) {
  std::vector<TableDef> tables = {{"a", {{"x", SemanticType::kNumber}, {"y", SemanticType::kNumber}}, {"x"}},
                                  {"b", {{"z", SemanticType::kNumber}}, {"z"}}};
  EXPECT_THROW(SchemaCatalog(tables, {{{"b", "z"}, {"a", "y"}}}), CatalogError);
  EXPECT_THROW(SchemaCatalog(tables, {{{"b", "z"}, {"c", "x"}}}), CatalogError);
  EXPECT_NO_THROW(SchemaCatalog(tables, {{{"b", "z"}, {"a", "x"}}}));
}

TEST(Catalog, MalformedDescriptorThrows) {
  EXPECT_THROW(parse_schema_descriptor("{"), CatalogError);
  EXPECT_THROW(parse_schema_descriptor(R"({"tables": [{"name": "a", "columns": [{"name": "x", "type": "blob"}]}]})"),
               Error);
}

TEST(Catalog, MissingSourceThrows) {
  EXPECT_THROW(load_catalog(testkit::data_dir() / "does-not-exist"), CatalogError);
}

TEST(Catalog, EdgeWeightsOverride) {
  auto ld = testkit::movies();
  ld.catalog.set_edge_weights({{"starring.aid", 3.5}, {"bogus.col", 9}});
  double aid_w = 0, mid_w = 0;
  for (const auto& e : ld.catalog.edges()) {
    if (ld.catalog.qualified_name(e.from) == "starring.aid") aid_w = e.weight;
    if (ld.catalog.qualified_name(e.from) == "starring.mid") mid_w = e.weight;
  }
  EXPECT_DOUBLE_EQ(aid_w, 3.5);
  EXPECT_DOUBLE_EQ(mid_w, 1.0);
}

TEST(SchemaGraphTest, AdjacencyMatchesEdges) {
  auto ld = testkit::movies();
  SchemaGraph g = join_graph(ld.catalog);
  EXPECT_EQ(g.node_count(), 3u);
  TableId starring = *ld.catalog.find_table("starring");
  TableId actor = *ld.catalog.find_table("actor");
  EXPECT_EQ(g.incident(starring).size(), 2u);
  EXPECT_EQ(g.incident(actor).size(), 1u);
}

TEST(ValueIndexTest, IndexesTextColumns) {
  auto ld = testkit::movies();
  ValueIndex idx = build_value_index(ld.catalog, ld.db);
  ColumnId actor_name = ld.catalog.column_id("actor", "name");
  ColumnId movie_name = ld.catalog.column_id("movies", "name");
  EXPECT_TRUE(idx.contains("Tom Hanks", actor_name));
  EXPECT_FALSE(idx.contains("Tom Hanks", movie_name));
  // "Cher" is both an actor and a movie.
  const auto* occ = idx.lookup("Cher");
  ASSERT_NE(occ, nullptr);
  EXPECT_EQ(occ->size(), 2u);
  EXPECT_EQ(idx.lookup("nobody"), nullptr);
}

TEST(ValueIndexTest, AutocompleteIsCaseInsensitiveAndBounded) {
  auto ld = testkit::movies();
  ValueIndex idx = build_value_index(ld.catalog, ld.db);
  auto hits = idx.autocomplete("tom", 10);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].value, "Tom Hanks");
  auto many = idx.autocomplete("", 5);
  EXPECT_EQ(many.size(), 5u);
  for (std::size_t i = 1; i < many.size(); ++i) {
    EXPECT_LE(many[i - 1].value.size(), many[i].value.size());
  }
}

}  // namespace
}  // namespace dualsql
